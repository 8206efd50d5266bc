"""Shared builders for tests.

``action_fixture`` produces *partial* bracket tables: only the actions of
the two degree-one generators are filled in (grading and antisymmetry hold,
Jacobi is not imposed).  They exist to exercise the fake-diamond and
run-table bookkeeping, which no in-scope construction reaches.  Never feed
them to whole-algebra suites such as ``jacobi_audit``.
"""
import numpy as np

from diamondlab.liecore import GradedLieAlgebra


def action_fixture(p, N, genuine, fake1=(), y_extra=(), x_kill=(), q=None):
    """NON-JACOBI fixture.

    genuine: {degree: (c1, c2)} two-dimensional diamonds with
             [w x y] = c1 u and [w y x] = c2 u (type c1/(c1+c2)).
    fake1:   degrees m where L_{m-1} -> L_m is x-only and L_m -> L_{m+1} is y-only.
    y_extra: one-dimensional degrees m where y acts by 1 as well as x.
    x_kill:  one-dimensional degrees m where x acts by 0.
    """
    fake1 = set(fake1)
    dims = [2 if (m == 1 or m in genuine) else 1 for m in range(1, N + 1)]
    acts = {}  # m -> (Mx, My), each d_m x d_{m+1}
    for m in range(2, N):
        d, dn = dims[m - 1], dims[m]
        Mx = np.zeros((d, dn), dtype=np.int64)
        My = np.zeros((d, dn), dtype=np.int64)
        if d == 2:
            c1, c2 = genuine[m]
            My[0, 0] = c1
            Mx[1, 0] = c2
        elif dn == 2:
            Mx[0, 0] = 1
            My[0, 1] = 1
        elif m in fake1:
            My[0, 0] = 1
        else:
            Mx[0, 0] = 0 if m in x_kill else 1
            if m in y_extra:
                My[0, 0] = 1
        acts[m] = (Mx % p, My % p)
    tables = {(1, 1): np.zeros((2, 2, 1), dtype=np.int64)}
    tables[(1, 1)][0, 1, 0] = 1
    tables[(1, 1)][1, 0, 0] = p - 1
    for m, (Mx, My) in acts.items():
        # [e^1_k, e^m_b] = -[e^m_b, e^1_k]
        tables[(1, m)] = (-np.stack([Mx, My])) % p
    return GradedLieAlgebra(p, dims, tables, q=q, generators={"x": (1, 0), "y": (0, 1)})


def loop_pattern(q, N, types=None):
    """Genuine diamonds at 1 mod (q-1) with the given {degree: (c1, c2)} overrides (default type -1)."""
    types = types or {}
    genuine = {m: types.get(m, (1, -2)) for m in range(q, N + 1, q - 1) if m < N}
    return genuine


def necklace_dims(r, N):
    """Witt's formula: dimension of degree-n part of the free Lie algebra on r generators."""
    def mobius(n):
        res, k = 1, 2
        while k * k <= n:
            if n % k == 0:
                n //= k
                if n % k == 0:
                    return 0
                res = -res
            k += 1
        return -res if n > 1 else res

    out = []
    for n in range(1, N + 1):
        s = sum(mobius(d) * r ** (n // d) for d in range(1, n + 1) if n % d == 0)
        out.append(s // n)
    return tuple(out)


LOOP_RELATORS = """\
relator = [y,x,y]
relator = [y,x^2,y]
relator = [y,x^3,y]
relator = [y,x^4,y]
relator = [y,x^7]
relator = [y,x^5,y,y]
relator = [y,x^5,y,x] + 2*[y,x^5,x,y]
"""

# (name, text, N): the matrix every contract test runs over
MATRIX = [
    ("free2", "p = 7\ngenerators = x, y\n", 10),
    ("abelian", "p = 7\ngenerators = x, y\nrelator = [x,y]\n", 5),
    ("two_relators", "p = 7\ngenerators = x, y\nrelator = [y,x,y]\nrelator = [y,x,x,x]\n", 8),
    ("loop7", "p = 7\ngenerators = x, y\n" + LOOP_RELATORS, 12),
    ("free3", "p = 5\ngenerators = a b c\n", 6),
    ("mixed", "p = 5\ngenerators = x, y\nrelator = [y,x^2,y] + 2*[y,x,y,x]\n", 9),
    ("p11", "p = 11  # comment\ngenerators = x, y\nrelator = 3*[y,x,y] - [x,y,x]\n", 9),
]
