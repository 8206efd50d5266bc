"""Truncated N-graded Lie algebras over F_p.

A :class:`GradedLieAlgebra` stores, for each pair of degrees ``i <= j`` with
``i + j <= N``, a dense array ``T[a, b, c]`` giving the ``c``-th coordinate of
``[e^i_a, e^j_b]``.  The ``(j, i)`` table is implied by antisymmetry.
Components are tiny for thin algebras, so dense per-pair arrays are cheap and
let Jacobi audits vectorise over whole degree triples.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Mapping, Sequence

import numpy as np

from .errors import (DomainError, SchemaError, TruncationError,
                     UnknownGeneratorError)
from .modp import fp_binom, require_prime


@dataclass(frozen=True)
class HomogeneousElement:
    degree: int
    coords: tuple
    p: int

    def __post_init__(self):
        object.__setattr__(self, "coords", tuple(int(c) % self.p for c in self.coords))

    @property
    def is_zero(self) -> bool:
        return not any(self.coords)

    def array(self) -> np.ndarray:
        return np.array(self.coords, dtype=np.int64)

    def _check(self, other):
        if not isinstance(other, HomogeneousElement):
            return NotImplemented
        if other.degree != self.degree or other.p != self.p:
            raise DomainError(f"cannot add elements of degree {self.degree} and {other.degree}")
        return None

    def __add__(self, other):
        if self._check(other) is NotImplemented:
            return NotImplemented
        return HomogeneousElement(self.degree, tuple(a + b for a, b in zip(self.coords, other.coords)), self.p)

    def __sub__(self, other):
        if self._check(other) is NotImplemented:
            return NotImplemented
        return HomogeneousElement(self.degree, tuple(a - b for a, b in zip(self.coords, other.coords)), self.p)

    def __neg__(self):
        return HomogeneousElement(self.degree, tuple(-a for a in self.coords), self.p)

    def __rmul__(self, c: int):
        return HomogeneousElement(self.degree, tuple(int(c) * a for a in self.coords), self.p)

    def __repr__(self):
        return f"<deg {self.degree}: {list(self.coords)}>"


@dataclass(frozen=True)
class LeftNormedWord:
    """``[seed l1 l2 ...]`` with letters given as ``(generator, exponent)`` pairs."""

    seed: object
    letters: tuple = ()

    def __post_init__(self):
        letters = []
        for item in self.letters:
            if isinstance(item, str):
                item = (item, 1)
            name, k = item
            if k < 1:
                raise DomainError(f"exponent must be >= 1, got {k} on {name!r}")
            letters.append((name, int(k)))
        object.__setattr__(self, "letters", tuple(letters))

    def expanded(self) -> list:
        out = []
        for name, k in self.letters:
            out.extend([name] * k)
        return out

    def __str__(self):
        seed = self.seed if isinstance(self.seed, str) else repr(self.seed)
        parts = [seed] + [n if k == 1 else f"{n}^{k}" for n, k in self.letters]
        return "[" + ",".join(parts) + "]"


class GradedLieAlgebra:
    """Immutable truncated graded Lie algebra ``L_1 + ... + L_N`` over F_p."""

    def __init__(self, p: int, dims: Sequence[int], tables: Mapping, *, q=None,
                 generators: Mapping | None = None, validate: bool = True):
        self.p = require_prime(p)
        self.dims = tuple(int(d) for d in dims)
        self.max_degree = len(self.dims)
        self.q = q
        if self.max_degree < 2:
            raise DomainError("max_degree must be at least 2")
        if any(d < 0 for d in self.dims):
            raise SchemaError("dimensions must be non-negative")
        self._tables = {}
        for (i, j), arr in tables.items():
            arr = np.asarray(arr, dtype=np.int64) % self.p
            if i > j:
                i, j, arr = j, i, (-np.transpose(arr, (1, 0, 2))) % self.p
            arr.flags.writeable = False
            self._tables[(i, j)] = arr
        self.generators = {}
        for name, coords in (generators or {}).items():
            coords = tuple(int(c) % self.p for c in coords)
            if len(coords) != self.dims[0]:
                raise SchemaError(f"generator {name!r} has {len(coords)} coordinates, dim L1 = {self.dims[0]}")
            self.generators[name] = coords
        if validate:
            self._validate()

    # -- structure -------------------------------------------------------

    def _validate(self):
        N = self.max_degree
        for (i, j), arr in self._tables.items():
            if i < 1 or i + j > N:
                raise SchemaError(f"bracket table ({i},{j}) outside degrees 1..{N}")
            want = (self.dim(i), self.dim(j), self.dim(i + j))
            if arr.shape != want:
                raise SchemaError(f"bracket table ({i},{j}) has shape {arr.shape}, expected {want}")
            if i == j and np.any((arr + np.transpose(arr, (1, 0, 2))) % self.p):
                raise SchemaError(f"bracket table ({i},{i}) is not alternating")

    def dim(self, m: int) -> int:
        if 1 <= m <= self.max_degree:
            return self.dims[m - 1]
        raise TruncationError(f"degree {m} outside 1..{self.max_degree}")

    def table(self, i: int, j: int) -> np.ndarray:
        """``T[a, b, c]``: coordinate ``c`` of ``[e^i_a, e^j_b]``, for any order of ``i, j``."""
        if i + j > self.max_degree:
            raise TruncationError(f"bracket of degrees {i}+{j} exceeds max_degree {self.max_degree}")
        if i <= j:
            arr = self._tables.get((i, j))
            if arr is None:
                return np.zeros((self.dim(i), self.dim(j), self.dim(i + j)), dtype=np.int64)
            return arr
        return (-np.transpose(self.table(j, i), (1, 0, 2))) % self.p

    def stored_pairs(self):
        return sorted(self._tables)

    # -- elements --------------------------------------------------------

    def element(self, degree: int, coords) -> HomogeneousElement:
        coords = tuple(coords)
        if len(coords) != self.dim(degree):
            raise DomainError(f"degree {degree} has dimension {self.dim(degree)}, got {len(coords)} coordinates")
        return HomogeneousElement(degree, coords, self.p)

    def zero(self, degree: int) -> HomogeneousElement:
        return HomogeneousElement(degree, (0,) * self.dim(degree), self.p)

    def basis(self, degree: int, k: int) -> HomogeneousElement:
        d = self.dim(degree)
        return HomogeneousElement(degree, tuple(int(i == k) for i in range(d)), self.p)

    def basis_elements(self, degree: int) -> list:
        return [self.basis(degree, k) for k in range(self.dim(degree))]

    def generator(self, name: str) -> HomogeneousElement:
        try:
            return HomogeneousElement(1, self.generators[name], self.p)
        except KeyError:
            raise UnknownGeneratorError(f"unknown generator {name!r}") from None

    def right_action(self, m: int, g: HomogeneousElement) -> np.ndarray:
        """Matrix ``M`` (``d_m x d_{m+1}``) of ``ad g`` on ``L_m``: row ``a`` is ``[e^m_a, g]``."""
        return np.einsum("abc,b->ac", self.table(m, g.degree), g.array()) % self.p

    def __eq__(self, other):
        if not isinstance(other, GradedLieAlgebra):
            return NotImplemented
        if (self.p, self.dims, self.q, self.generators) != (other.p, other.dims, other.q, other.generators):
            return False
        keys = set(self._tables) | set(other._tables)
        return all(np.array_equal(self.table(i, j), other.table(i, j)) for i, j in keys)

    def __repr__(self):
        return f"GradedLieAlgebra(p={self.p}, q={self.q}, N={self.max_degree})"

    def with_entry(self, i: int, j: int, a: int, b: int, out) -> "GradedLieAlgebra":
        """Copy with the bracket ``[e^i_a, e^j_b]`` replaced by ``out`` (antisymmetry kept)."""
        tables = {k: v.copy() for k, v in self._tables.items()}
        out = np.asarray(out, dtype=np.int64) % self.p
        if i > j:
            i, j, a, b, out = j, i, b, a, (-out) % self.p
        arr = tables.get((i, j))
        if arr is None:
            arr = np.zeros((self.dim(i), self.dim(j), self.dim(i + j)), dtype=np.int64)
        arr[a, b] = out
        if i == j:
            arr[b, a] = (-out) % self.p
        tables[(i, j)] = arr
        return GradedLieAlgebra(self.p, self.dims, tables, q=self.q, generators=self.generators)


# ---------------------------------------------------------------------------
# bracket evaluation
# ---------------------------------------------------------------------------

def bracket(alg: GradedLieAlgebra, u: HomogeneousElement, v: HomogeneousElement) -> HomogeneousElement:
    deg = u.degree + v.degree
    if deg > alg.max_degree:
        raise TruncationError(f"[{u.degree}, {v.degree}] lands in degree {deg} > max_degree {alg.max_degree}")
    T = alg.table(u.degree, v.degree)
    out = np.einsum("a,b,abc->c", u.array(), v.array(), T) % alg.p
    return HomogeneousElement(deg, tuple(out.tolist()), alg.p)


def _resolve(alg, item) -> HomogeneousElement:
    if isinstance(item, HomogeneousElement):
        return item
    return alg.generator(item)


def eval_word(alg: GradedLieAlgebra, word) -> HomogeneousElement:
    """Evaluate a left-normed word; accepts a :class:`LeftNormedWord` or ``(seed, *letters)``."""
    if not isinstance(word, LeftNormedWord):
        seed, *letters = word
        word = LeftNormedWord(seed, tuple(letters))
    acc = _resolve(alg, word.seed)
    total = acc.degree + sum(k for _, k in word.letters)
    if total > alg.max_degree:
        raise TruncationError(f"word {word} has degree {total} > max_degree {alg.max_degree}")
    for name, k in word.letters:
        g = alg.generator(name) if isinstance(name, str) else name
        for _ in range(k):
            acc = bracket(alg, acc, g)
    return acc


def bracket_seq(alg: GradedLieAlgebra, seed: HomogeneousElement, *items) -> HomogeneousElement:
    """Left-normed product ``[seed a b ...]`` of arbitrary homogeneous elements / generator names."""
    acc = seed
    for it in items:
        acc = bracket(alg, acc, _resolve(alg, it))
    return acc


def ad_power(alg: GradedLieAlgebra, u: HomogeneousElement, g, k: int) -> HomogeneousElement:
    g = _resolve(alg, g)
    for _ in range(k):
        u = bracket(alg, u, g)
    return u


@dataclass
class GenJacobiResult:
    lhs: HomogeneousElement
    rhs: HomogeneousElement
    coefficients: list
    equal: bool


def gen_jacobi_coefficients(n: int, p: int) -> list:
    """``(-1)^i C(n, i) mod p`` for ``i = 0..n``."""
    return [(-fp_binom(n, i, p) if i % 2 else fp_binom(n, i, p)) % p for i in range(n + 1)]


def gen_jacobi_expand(alg: GradedLieAlgebra, a, b, c, n: int) -> GenJacobiResult:
    """Compare ``[a [b c^n]]`` with ``sum_i (-1)^i C(n,i) [a c^i b c^{n-i}]``."""
    if n < 1:
        raise DomainError(f"n must be >= 1, got {n}")
    a, b, c = _resolve(alg, a), _resolve(alg, b), _resolve(alg, c)
    lhs = bracket(alg, a, ad_power(alg, b, c, n))
    coeffs = gen_jacobi_coefficients(n, alg.p)
    rhs = alg.zero(lhs.degree)
    left = a
    for i, coef in enumerate(coeffs):
        if coef:
            term = ad_power(alg, bracket(alg, left, b), c, n - i)
            rhs = rhs + coef * term
        if i < n:
            left = bracket(alg, left, c)
    return GenJacobiResult(lhs, rhs, coeffs, lhs == rhs)


def centralizes(alg: GradedLieAlgebra, y: HomogeneousElement, m: int) -> bool:
    """True iff ``[b, y] = 0`` for every basis element ``b`` of ``L_m``."""
    return not np.any(alg.right_action(m, y))


# ---------------------------------------------------------------------------
# consistency audit
# ---------------------------------------------------------------------------

def jacobi_audit(alg: GradedLieAlgebra, up_to: int | None = None) -> list:
    """Basis triples of total degree ``<= up_to`` on which Jacobi fails.

    Each triple is ``((i, a), (j, b), (k, c))`` with the three basis elements
    distinct and listed in increasing ``(degree, index)`` order; the result is
    sorted.  Triples with a repeated element vanish by antisymmetry alone.
    """
    N = alg.max_degree
    up_to = N if up_to is None else up_to
    if up_to > N:
        raise TruncationError(f"up_to={up_to} exceeds max_degree {N}")
    p = alg.p
    dims = (0,) + alg.dims
    cache = {}

    def T(i, j):
        # None marks an identically zero table so its term can be skipped
        if (i, j) not in cache:
            arr = alg.table(i, j)
            cache[(i, j)] = arr if arr.any() else None
        return cache[(i, j)]

    bad = []
    for i in range(1, up_to // 3 + 1):
        if not dims[i]:
            continue
        for j in range(i, (up_to - i) // 2 + 1):
            if not dims[j]:
                continue
            for k in range(j, up_to - i - j + 1):
                if not dims[k] or not dims[i + j + k]:
                    continue
                J = None
                for spec, A, B in (("bct,ats->abcs", T(j, k), T(i, j + k)),
                                   ("cat,bts->abcs", T(k, i), T(j, k + i)),
                                   ("abt,cts->abcs", T(i, j), T(k, i + j))):
                    if A is not None and B is not None:
                        term = np.einsum(spec, A, B)
                        J = term if J is None else J + term
                if J is None:
                    continue
                J %= p
                if not J.any():
                    continue
                for a, b, c in sorted({tuple(x[:3]) for x in np.argwhere(J).tolist()}):
                    if (i == j and a >= b) or (j == k and b >= c):
                        continue
                    bad.append(((i, a), (j, b), (k, c)))
    bad.sort()
    return bad


# ---------------------------------------------------------------------------
# JSON persistence
# ---------------------------------------------------------------------------

def to_dict(alg: GradedLieAlgebra) -> dict:
    entries = []
    for (i, j) in alg.stored_pairs():
        arr = alg.table(i, j)
        for a in range(arr.shape[0]):
            for b in range(arr.shape[1]):
                if i == j and a >= b:
                    continue
                out = [[int(c), int(v)] for c, v in enumerate(arr[a, b]) if v]
                if out:
                    entries.append({"i": i, "j": j, "a": a, "b": b, "out": out})
    return {
        "p": alg.p,
        "q": alg.q,
        "max_degree": alg.max_degree,
        "dims": list(alg.dims),
        "generators": {k: list(v) for k, v in alg.generators.items()},
        "brackets": entries,
    }


def dumps(alg: GradedLieAlgebra) -> str:
    d = to_dict(alg)
    head = ",\n".join(f" {json.dumps(k)}: {json.dumps(d[k], separators=(',', ':'))}"
                      for k in ("p", "q", "max_degree", "dims", "generators"))
    rows = ",\n".join("  " + json.dumps(e, separators=(",", ":")) for e in d["brackets"])
    body = f' "brackets": [\n{rows}\n ]' if rows else ' "brackets": []'
    return "{\n" + head + ",\n" + body + "\n}\n"


def save(alg: GradedLieAlgebra, sink) -> None:
    """Write ``alg`` as JSON to a path or a text stream."""
    text = dumps(alg)
    if hasattr(sink, "write"):
        sink.write(text)
    else:
        with open(sink, "w") as fh:
            fh.write(text)


def from_dict(data: dict, *, audit: bool = False) -> GradedLieAlgebra:
    try:
        p = data["p"]
        N = data["max_degree"]
        dims = data["dims"]
        entries = data["brackets"]
    except (KeyError, TypeError) as exc:
        raise SchemaError(f"missing field {exc}") from None
    if not isinstance(p, int) or isinstance(p, bool):
        raise SchemaError("p must be an integer")
    p = require_prime(p)
    if not isinstance(dims, list) or len(dims) != N:
        raise SchemaError(f"dims must be a list of length max_degree={N}")
    if any(not isinstance(d, int) or d < 0 for d in dims):
        raise SchemaError("dims must be non-negative integers")
    dim = lambda m: dims[m - 1]
    tables = {}
    seen = set()
    for e in entries:
        try:
            i, j, a, b, out = e["i"], e["j"], e["a"], e["b"], e["out"]
        except (KeyError, TypeError) as exc:
            raise SchemaError(f"bracket entry missing {exc}") from None
        if not (1 <= i <= j and i + j <= N):
            raise SchemaError(f"bracket entry degrees ({i},{j}) invalid for max_degree {N}")
        if not (0 <= a < dim(i) and 0 <= b < dim(j)):
            raise SchemaError(f"bracket entry ({i},{j},{a},{b}) indexes outside the components")
        if i == j and a == b:
            raise SchemaError(f"self-bracket ({i},{i},{a},{a}) must be zero")
        key = (i, j) + ((a, b) if i < j or a < b else (b, a))
        if key in seen:
            raise SchemaError(f"duplicate bracket entry {key}")
        seen.add(key)
        arr = tables.setdefault((i, j), np.zeros((dim(i), dim(j), dim(i + j)), dtype=np.int64))
        vec = np.zeros(dim(i + j), dtype=np.int64)
        for pair in out:
            if not (isinstance(pair, list) and len(pair) == 2):
                raise SchemaError(f"bad output pair {pair!r}")
            c, v = pair
            if not 0 <= c < dim(i + j):
                raise SchemaError(f"bracket ({i},{j},{a},{b}) output index {c} outside dim L_{i + j} = {dim(i + j)}")
            if not 1 <= v < p:
                raise SchemaError(f"coefficient {v} not in [1, {p})")
            vec[c] = v
        arr[a, b] = vec
        if i == j:
            arr[b, a] = (-vec) % p
    q = data.get("q")
    alg = GradedLieAlgebra(p, dims, tables, q=q, generators=data.get("generators") or {})
    if audit:
        bad = jacobi_audit(alg)
        if bad:
            raise SchemaError(f"Jacobi identity fails on {len(bad)} basis triples, first {bad[0]}")
    return alg


def loads(text: str, *, audit: bool = False) -> GradedLieAlgebra:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SchemaError(f"invalid JSON: {exc}") from None
    return from_dict(data, audit=audit)


def load(source, *, audit: bool = False) -> GradedLieAlgebra:
    if hasattr(source, "read"):
        return loads(source.read(), audit=audit)
    with open(source) as fh:
        return loads(fh.read(), audit=audit)
