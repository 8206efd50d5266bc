"""Zassenhaus algebras W(1;n) and the loop algebra over their cyclic grading.

``W(1;n)`` has basis ``e_{-1}, ..., e_{q-2}`` with divided-power structure
constants

    [e_i, e_j] = (C(i+j+1, j) - C(i+j+1, i)) e_{i+j}

(zero when ``i + j`` leaves ``[-1, q-2]``).  Giving ``e_i`` residue
``i mod (q-1)`` is a Z/(q-1)-grading in which only the class of ``-1`` is
two-dimensional.  The loop algebra puts a copy of residue class ``-m`` in
degree ``m``; its only two-dimensional components sit in degrees
``1 mod (q-1)`` and every one of them is a diamond of type -1.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .errors import DomainError
from .liecore import GradedLieAlgebra
from .modp import PrimePower, fp_binom


def zassenhaus_constant(i: int, j: int, p: int, q: int) -> int:
    s = i + j
    if s < -1 or s > q - 2:
        return 0
    return (fp_binom(s + 1, j, p) - fp_binom(s + 1, i, p)) % p


@dataclass
class ZassenhausAlgebra:
    p: int
    n: int
    q: int
    constants: np.ndarray = field(repr=False)  # constants[i+1, j+1] = c(i, j)

    @property
    def indices(self) -> range:
        return range(-1, self.q - 1)

    def c(self, i: int, j: int) -> int:
        if not (-1 <= i <= self.q - 2 and -1 <= j <= self.q - 2):
            raise DomainError(f"index out of range for W(1;{self.n}): ({i}, {j})")
        return int(self.constants[i + 1, j + 1])

    def jacobi_violations(self) -> list:
        """Index triples ``(a, b, c)``, ``a < b < c``, on which Jacobi fails."""
        q, p, C = self.q, self.p, self.constants
        idx = np.arange(-1, q - 1)
        B, Cc = np.meshgrid(idx, idx, indexing="ij")

        def into(s):
            # c(u, v) already vanishes when u + v is out of range, so any valid index will do
            return np.where((s >= -1) & (s <= q - 2), s, -1) + 1

        bad = []
        for a in range(-1, q - 1):
            t1 = C[B + 1, Cc + 1] * C[a + 1, into(B + Cc)]
            t2 = C[Cc + 1, a + 1] * C[B + 1, into(Cc + a)]
            t3 = C[a + 1, B + 1] * C[Cc + 1, into(a + B)]
            J = (t1 + t2 + t3) % p
            for bi, ci in np.argwhere(J):
                b, c = int(idx[bi]), int(idx[ci])
                if a < b < c:
                    bad.append((a, b, c))
        return bad


def zassenhaus(p: int, n: int, *, audit: bool = True) -> ZassenhausAlgebra:
    qp = PrimePower(p, n)
    qp.check_nottingham_regime()
    q = qp.q
    C = np.zeros((q, q), dtype=np.int64)
    for i in range(-1, q - 1):
        for j in range(-1, q - 1):
            C[i + 1, j + 1] = zassenhaus_constant(i, j, p, q)
    z = ZassenhausAlgebra(p, n, q, C)
    if audit:
        bad = z.jacobi_violations()
        if bad:
            raise AssertionError(f"Zassenhaus table fails Jacobi on {bad[:3]}")
    return z


@dataclass
class CyclicGrading:
    period: int
    residue: Callable[[int], int]

    @classmethod
    def standard(cls, z: ZassenhausAlgebra) -> "CyclicGrading":
        period = z.q - 1
        return cls(period, lambda i: i % period)


def grading_audit(z: ZassenhausAlgebra, g: CyclicGrading) -> bool:
    """True iff ``r(e_{i+j}) = r(e_i) + r(e_j)`` whenever ``c(i, j) != 0``."""
    for i in z.indices:
        for j in z.indices:
            if z.c(i, j) and g.residue(i + j) % g.period != (g.residue(i) + g.residue(j)) % g.period:
                return False
    return True


def loop_basis(q: int, m: int) -> list:
    """Zassenhaus indices spanning degree ``m`` of the loop algebra, in stored order."""
    r = (-m) % (q - 1)
    return [i for i in range(-1, q - 1) if i % (q - 1) == r]


def loop_nottingham(p: int, n: int, max_degree: int) -> GradedLieAlgebra:
    """Loop algebra of ``W(1;n)`` over its cyclic grading, truncated at ``max_degree``.

    Degree ``m`` is spanned by ``e_i`` with ``i == -m mod (q-1)``.  The
    generators are ``x = e_{-1}`` and ``y = e_{q-2}`` in degree 1.
    """
    z = zassenhaus(p, n)
    q, period = z.q, z.q - 1
    if max_degree < 2 * q:
        raise DomainError(f"max_degree must be at least 2q = {2 * q}, got {max_degree}")
    bases = {r: loop_basis(q, r) for r in range(1, period + 1)}
    basis_of = lambda m: bases[(m - 1) % period + 1]
    dims = [len(basis_of(m)) for m in range(1, max_degree + 1)]

    # the table for (m, m') depends only on the residues of m and m'
    cache = {}

    def residue_table(m, mm):
        key = ((m - 1) % period, (mm - 1) % period)
        if key not in cache:
            left, right, out = basis_of(m), basis_of(mm), basis_of(m + mm)
            arr = np.zeros((len(left), len(right), len(out)), dtype=np.int64)
            for a, i in enumerate(left):
                for b, j in enumerate(right):
                    c = z.c(i, j)
                    if c:
                        arr[a, b, out.index(i + j)] = c
            cache[key] = arr if arr.any() else None
        return cache[key]

    tables = {}
    for m in range(1, max_degree // 2 + 1):
        for mm in range(m, max_degree - m + 1):
            arr = residue_table(m, mm)
            if arr is not None:
                tables[(m, mm)] = arr
    return GradedLieAlgebra(p, dims, tables, q=q, generators={"x": (1, 0), "y": (0, 1)})
