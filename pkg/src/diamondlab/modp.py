"""Prime-field scalars and binomial coefficients modulo a prime.

Residues are plain ``int`` values in ``[0, p)``.  Binomial coefficients are
evaluated digit by digit in base ``p`` (Lucas), which is what makes the
structure constants of the Zassenhaus algebras cheap to compute.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from .errors import DomainError, ModulusError

DEFAULT_Q_BOUND = 343

CASE_NONE = "none"
CASE_POWER_OF_P = "power_of_p"
CASE_A1_N_PLUS_1 = "a1_n_plus_1_power"
CASE_AM1_N3 = "a_minus1_n3"


@lru_cache(maxsize=None)
def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    return all(n % d for d in range(3, math.isqrt(n) + 1, 2))


def require_prime(p: int) -> int:
    if not isinstance(p, (int, np.integer)) or not is_prime(int(p)):
        raise ModulusError(f"modulus {p!r} is not a prime")
    return int(p)


def is_power_of(n: int, p: int) -> bool:
    """True when ``n = p^k`` for some ``k >= 0``."""
    if n < 1:
        return False
    while n % p == 0:
        n //= p
    return n == 1


def inv(a: int, p: int) -> int:
    a %= p
    if a == 0:
        raise ZeroDivisionError(f"0 has no inverse modulo {p}")
    return pow(a, -1, p)


def signed(a: int, p: int) -> int:
    """Representative of ``a mod p`` in ``(-p/2, p/2]``."""
    a %= p
    return a - p if a > p // 2 else a


@dataclass(frozen=True)
class PrimePower:
    p: int
    n: int
    q: int = field(init=False)

    def __post_init__(self):
        require_prime(self.p)
        if self.n < 1:
            raise DomainError(f"exponent must be positive, got {self.n}")
        object.__setattr__(self, "q", self.p**self.n)

    @classmethod
    def from_q(cls, q: int) -> "PrimePower":
        if q < 2:
            raise ModulusError(f"{q} is not a prime power")
        p = next(d for d in range(2, q + 1) if q % d == 0)
        n = 0
        r = q
        while r % p == 0:
            r //= p
            n += 1
        if r != 1:
            raise ModulusError(f"{q} is not a prime power")
        return cls(p, n)

    def check_nottingham_regime(self):
        if self.p <= 3:
            raise DomainError(f"characteristic must exceed 3, got p={self.p}")
        if self.q <= 5:
            raise DomainError(f"q must exceed 5, got q={self.q}")


def _prime_of(qp) -> int:
    return qp.p if isinstance(qp, PrimePower) else require_prime(qp)


@lru_cache(maxsize=None)
def _pascal(p: int) -> tuple:
    rows = [[1]]
    for a in range(1, p):
        prev = rows[-1]
        rows.append([1] + [(prev[k - 1] + prev[k]) % p for k in range(1, a)] + [1])
    return tuple(tuple(r) for r in rows)


def fp_binom(top: int, bottom: int, p: int) -> int:
    """Binomial coefficient ``C(top, bottom) mod p`` via base-p digits.

    Out-of-range ``bottom`` (negative or above ``top``) gives 0.
    """
    p = require_prime(p)
    if top < 0:
        raise DomainError(f"top index must be non-negative, got {top}")
    if bottom < 0 or bottom > top:
        return 0
    table = _pascal(p)
    result = 1
    while top:
        t, b = top % p, bottom % p
        if b > t:
            return 0
        result = result * table[t][b] % p
        top //= p
        bottom //= p
    return result


def binom_signed(top: int, bottom: int, p: int) -> int:
    """Like :func:`fp_binom` but accepts negative ``top`` via the upper negation rule."""
    if top >= 0:
        return fp_binom(top, bottom, p)
    if bottom < 0:
        return 0
    # C(-n, k) = (-1)^k C(n+k-1, k)
    val = fp_binom(-top + bottom - 1, bottom, p)
    return (-val) % p if bottom % 2 else val


@lru_cache(maxsize=4096)
def binomial_row(n: int, p: int) -> np.ndarray:
    """Row ``C(n, 0..n) mod p`` as an int64 array."""
    row = np.fromiter((fp_binom(n, j, p) for j in range(n + 1)), dtype=np.int64, count=n + 1)
    row.flags.writeable = False
    return row


# ---------------------------------------------------------------------------
# symmetry congruence for binomials below a prime power
# ---------------------------------------------------------------------------

@dataclass
class LemmaReport:
    passed: bool
    counterexamples: list
    checked: int

    def to_dict(self):
        return {"pass": self.passed, "checked": self.checked,
                "counterexamples": [list(c) for c in self.counterexamples]}


def check_invert_symmetry(qp: PrimePower, q_bound: int = DEFAULT_Q_BOUND) -> LemmaReport:
    """Exhaustively test ``(-1)^a C(a,b) == (-1)^b C(q-1-b, q-1-a) mod p``.

    Every pair ``0 <= b <= a < q`` is tested.  Counterexamples are
    ``(a, b, lhs, rhs)`` tuples.
    """
    p, q = qp.p, qp.q
    if q > q_bound:
        raise DomainError(f"q={q} exceeds the exhaustive-check bound {q_bound}")
    bad = []
    checked = 0
    for a in range(q):
        for b in range(a + 1):
            lhs = fp_binom(a, b, p)
            if a % 2:
                lhs = -lhs % p
            rhs = fp_binom(q - 1 - b, q - 1 - a, p)
            if b % 2:
                rhs = -rhs % p
            checked += 1
            if lhs != rhs:
                bad.append((a, b, lhs, rhs))
    return LemmaReport(not bad, bad, checked)


# ---------------------------------------------------------------------------
# consecutive Pascal entries in constant proportion
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class BinomialVerdict:
    hypothesis_holds: bool
    case: str


def _hypothesis_holds(n: int, a: int, p: int) -> bool:
    row = binomial_row(n, p)
    # j runs over 1 < j < n
    return not np.any((row[1:n - 1] + a * row[2:n]) % p)


def trichotomy_case(n: int, a: int, p: int) -> str:
    """Which branch of the conclusion applies to ``(n, a)``, or ``"none"``."""
    a %= p
    if is_power_of(n, p):
        return CASE_POWER_OF_P
    if a == 1 and is_power_of(n + 1, p):
        return CASE_A1_N_PLUS_1
    if a == p - 1 and n == 3:
        return CASE_AM1_N3
    return CASE_NONE


def binomial_lemma_classify(n: int, a: int, qp) -> BinomialVerdict:
    """Test ``C(n, j-1) + a C(n, j) == 0 mod p`` for every ``1 < j < n``.

    ``qp`` is a :class:`PrimePower` or a prime.  When the congruences all
    hold, ``case`` names the branch of the trichotomy that explains it.
    """
    if n <= 2:
        raise DomainError(f"n must exceed 2, got {n}")
    p = _prime_of(qp)
    a %= p
    if not _hypothesis_holds(n, a, p):
        return BinomialVerdict(False, CASE_NONE)
    return BinomialVerdict(True, trichotomy_case(n, a, p))


def _polymul(f: np.ndarray, g: np.ndarray, p: int) -> np.ndarray:
    return np.convolve(f, g) % p


def _power_of_x_plus_1(n: int, p: int) -> np.ndarray:
    result = np.array([1], dtype=np.int64)
    base = np.array([1, 1], dtype=np.int64)
    while n:
        if n & 1:
            result = _polymul(result, base, p)
        base = _polymul(base, base, p)
        n >>= 1
    return result


def poly_condition_equivalent(n: int, a: int, p: int) -> bool:
    """Whether ``(x+a)(x+1)^n == x^{n+1} + (a+n)x^n + (an+1)x + a`` in ``F_p[x]``.

    The left side is expanded by polynomial multiplication, independently
    of the Lucas evaluation used by :func:`binomial_lemma_classify`.
    """
    if n <= 2:
        raise DomainError(f"n must exceed 2, got {n}")
    p = require_prime(p)
    a %= p
    lhs = _polymul(np.array([a, 1], dtype=np.int64), _power_of_x_plus_1(n, p), p)
    rhs = np.zeros(n + 2, dtype=np.int64)
    rhs[0] = a
    rhs[1] = (a * n + 1) % p
    rhs[n] = (a + n) % p
    rhs[n + 1] = 1
    return bool(np.array_equal(lhs, rhs))


def auxiliary_congruences(n: int, a: int, p: int) -> tuple[bool, bool]:
    """The two congruences forced on ``(n, a)`` when ``p`` does not divide ``n``.

    Returns ``((a - (-1)^n)(n - 1 - (-1)^n) == 0, a(n-1) + 2 == 0)`` mod p.
    """
    s = -1 if n % 2 else 1
    first = (a - s) * (n - 1 - s) % p == 0
    second = (a * (n - 1) + 2) % p == 0
    return first, second


def check_binomial_lemma(p: int, n_max: int, n_min: int = 3) -> LemmaReport:
    """Brute-force both directions of the lemma on ``n_min <= n <= n_max``, ``0 <= a < p``.

    A counterexample is ``(n, a, reason)``; reasons are ``"hypothesis_without_branch"``,
    ``"branch_without_hypothesis"``, ``"polynomial_mismatch"`` and ``"auxiliary"``.
    """
    p = require_prime(p)
    if n_min <= 2:
        raise DomainError(f"n must exceed 2, got {n_min}")
    bad = []
    checked = 0
    for n in range(n_min, n_max + 1):
        for a in range(p):
            verdict = binomial_lemma_classify(n, a, p)
            branch = trichotomy_case(n, a, p)
            checked += 1
            if verdict.hypothesis_holds and branch == CASE_NONE:
                bad.append((n, a, "hypothesis_without_branch"))
            if branch != CASE_NONE and not verdict.hypothesis_holds:
                bad.append((n, a, "branch_without_hypothesis"))
            if poly_condition_equivalent(n, a, p) != verdict.hypothesis_holds:
                bad.append((n, a, "polynomial_mismatch"))
            if verdict.hypothesis_holds and n % p and not all(auxiliary_congruences(n, a, p)):
                bad.append((n, a, "auxiliary"))
    return LemmaReport(not bad, bad, checked)


def check_lucas(p: int, top_max: int | None = None) -> LemmaReport:
    """Compare :func:`fp_binom` with exact integer binomials for ``0 <= top < top_max``."""
    p = require_prime(p)
    top_max = p * p if top_max is None else top_max
    bad = []
    checked = 0
    for top in range(top_max):
        for bottom in range(-1, top + 2):
            exact = math.comb(top, bottom) % p if 0 <= bottom <= top else 0
            got = fp_binom(top, bottom, p)
            checked += 1
            if got != exact:
                bad.append((top, bottom, got, exact))
    return LemmaReport(not bad, bad, checked)
