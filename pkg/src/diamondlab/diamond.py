"""Diamond analysis of thin Lie algebras with second diamond in degree q.

Given a truncated algebra this module finds the sandwich generator ``y``,
normalises ``x`` so that ``x, y`` are standard generators, assigns types to
diamonds (genuine ones and the one-dimensional "fake" ones of type 0 / 1),
tabulates the stretches of components centralised by ``y`` and checks the
structural statements about diamond spacing on every degree that is far
enough from the truncation point (``m <= N - q``).

Violations are collected as data; nothing in the analysis raises once the
standard generators have been found.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

from .errors import DomainError, NotNottinghamError, TruncationError
from .liecore import (GradedLieAlgebra, HomogeneousElement, ad_power, bracket,
                      bracket_seq, centralizes)
from .linalg import nullspace, rank
from .modp import fp_binom, inv, is_power_of, signed

FIRST, CHAIN, GENUINE, FAKE = "first", "chain", "genuine", "fake"


@dataclass(frozen=True)
class DiamondType:
    kind: str  # "finite", "infinity", "fake0", "fake1"
    value: int | None = None

    @property
    def inverse(self):
        """``mu^{-1}`` as a residue, 0 for infinite type, ``None`` for type 0."""
        if self.kind == "infinity":
            return 0
        v = self.scalar
        return None if v == 0 else v

    @property
    def scalar(self):
        """Type as a field element (fake diamonds read as 0 / 1), ``None`` for infinity."""
        return {"fake0": 0, "fake1": 1, "infinity": None}.get(self.kind, self.value)

    def to_json(self, p):
        if self.kind == "finite":
            return {"finite": self.value}
        return self.kind

    def label(self, p) -> str:
        if self.kind == "finite":
            return str(signed(self.value, p))
        return "inf" if self.kind == "infinity" else self.kind


INFINITY = DiamondType("infinity")
FAKE0 = DiamondType("fake0")
FAKE1 = DiamondType("fake1")


def finite(mu: int, p: int) -> DiamondType:
    return DiamondType("finite", mu % p)


@dataclass
class DiamondRecord:
    degree: int
    dim: int
    classification: str
    type: DiamondType | None = None
    alternate: tuple | None = None  # (degree, DiamondType)
    note: str | None = None

    @property
    def is_diamond(self) -> bool:
        return self.classification in (FIRST, GENUINE, FAKE)

    def readings(self) -> list:
        """Degrees this diamond may be placed at (primary first)."""
        if self.classification == FIRST:
            return [self.degree]
        out = [self.degree]
        if self.alternate is not None:
            out.append(self.alternate[0])
        return out

    def to_json(self, p):
        d = {"m": self.degree, "dim": self.dim, "class": self.classification}
        if self.type is not None:
            d["type"] = self.type.to_json(p)
            if self.type.kind == "finite" and self.type.value == p - 1:
                d["note"] = "= -1"
        if self.alternate is not None:
            d["alternate"] = {"m": self.alternate[0], "type": self.alternate[1].to_json(p)}
        if self.note and "note" not in d:
            d["note"] = self.note
        return d


@dataclass(frozen=True)
class Violation:
    check: str
    degree: int | None
    detail: str

    def to_json(self):
        return {"check": self.check, "m": self.degree, "detail": self.detail}


# ---------------------------------------------------------------------------
# helpers
# ---------------------------------------------------------------------------

def _spanning(alg: GradedLieAlgebra, m: int) -> HomogeneousElement:
    if alg.dim(m) != 1:
        raise DomainError(f"L_{m} has dimension {alg.dim(m)}, expected 1")
    return alg.basis(m, 0)


def _coefficient(u: HomogeneousElement, basis: HomogeneousElement, p: int):
    """``c`` with ``u = c * basis`` for a nonzero ``basis`` of a 1-dim component."""
    k = next(i for i, v in enumerate(basis.coords) if v)
    c = u.coords[k] * inv(basis.coords[k], p) % p
    return c if (c * basis) == u else None


def _normalized(v, p):
    v = [int(c) % p for c in v]
    k = next((i for i, c in enumerate(v) if c), None)
    if k is None:
        return tuple(v)
    s = inv(v[k], p)
    return tuple(c * s % p for c in v)


def second_diamond_degree(alg: GradedLieAlgebra) -> int:
    for m in range(2, alg.max_degree + 1):
        if alg.dim(m) == 2:
            return m
    raise NotNottinghamError("no two-dimensional component past L_1 within the stored window")


def detect_q(alg: GradedLieAlgebra) -> int:
    q = second_diamond_degree(alg)
    if not is_power_of(q, alg.p) or q <= 5:
        raise NotNottinghamError(f"second diamond in degree {q}, which is not a power q > 5 of p={alg.p}")
    return q


# ---------------------------------------------------------------------------
# generators
# ---------------------------------------------------------------------------

def find_sandwich_y(alg: GradedLieAlgebra, *, check: bool = True) -> HomogeneousElement:
    """The element ``y`` of ``L_1`` with ``[L_2, y] = 0``, first nonzero coordinate 1.

    With ``check`` the sandwich property ``[b y y] = 0`` is verified on every
    basis element up to degree ``N - 2``.
    """
    p = alg.p
    if alg.dim(1) != 2:
        raise NotNottinghamError(f"dim L_1 = {alg.dim(1)}, expected 2")
    if alg.dim(2) == 0:
        raise NotNottinghamError("L_2 = 0")
    # rows of M: z = e_k  ->  concatenated [b, z] over basis b of L_2
    T = alg.table(2, 1)  # (d2, 2, d3)
    M = np.transpose(T, (1, 0, 2)).reshape(2, -1)
    ker = nullspace(M.T, p)
    if ker.shape[0] != 1:
        raise NotNottinghamError(f"kernel of L_1 -> Hom(L_2, L_3) is {ker.shape[0]}-dimensional, expected 1")
    y = alg.element(1, _normalized(ker[0], p))
    if check:
        for m in range(1, alg.max_degree - 1):
            A = alg.right_action(m, y)
            B = alg.right_action(m + 1, y)
            if np.any(A @ B % p):
                raise NotNottinghamError(f"y is not a sandwich: [L_{m} y y] != 0")
    return y


STANDARD_CONDITIONS = ("[v1 x x] = 0", "[v1 y y] = 0", "[v1 y x] = -2[v1 x y]", "v1 != 0")


def standard_conditions(alg: GradedLieAlgebra, x, y, q: int) -> list:
    """Names of the standard-generator conditions that fail for ``x, y``."""
    v1 = ad_power(alg, y, x, q - 2)
    failed = []
    if not bracket_seq(alg, v1, x, x).is_zero:
        failed.append(STANDARD_CONDITIONS[0])
    if not bracket_seq(alg, v1, y, y).is_zero:
        failed.append(STANDARD_CONDITIONS[1])
    if bracket_seq(alg, v1, y, x) != (-2) * bracket_seq(alg, v1, x, y):
        failed.append(STANDARD_CONDITIONS[2])
    if v1.is_zero:
        failed.append(STANDARD_CONDITIONS[3])
    return failed


def normalize_generators(alg: GradedLieAlgebra, y: HomogeneousElement, q: int | None = None):
    """Choose ``x`` so that ``x, y`` are standard generators.

    Candidates are ``e + t y`` for ``t = 0, 1, ..., p-1`` with ``e`` the unit
    vector not parallel to ``y``, each scaled to leading coefficient 1; the
    first candidate passing every condition wins.
    """
    p = alg.p
    q = q if q is not None else (alg.q or detect_q(alg))
    if 2 * q > alg.max_degree:
        raise TruncationError(f"max_degree {alg.max_degree} too small for q={q}")
    e = (0, 1) if y.coords[0] else (1, 0)
    first_failure = None
    for t in range(p):
        x = alg.element(1, _normalized([a + t * b for a, b in zip(e, y.coords)], p))
        failed = standard_conditions(alg, x, y, q)
        if not failed:
            return x, y
        if first_failure is None:
            first_failure = failed
    raise NotNottinghamError("no standard x exists; for x = e: " + ", ".join(first_failure) + " fails")


# ---------------------------------------------------------------------------
# the analyzer context
# ---------------------------------------------------------------------------

class Analyzer:
    """Standard generators plus cached per-degree data for one algebra."""

    def __init__(self, alg: GradedLieAlgebra, x=None, y=None, q=None):
        self.alg = alg
        self.p = alg.p
        self.q = q if q is not None else (alg.q or detect_q(alg))
        if y is None:
            y = find_sandwich_y(alg)
        if x is None:
            x, y = normalize_generators(alg, y, self.q)
        self.x, self.y = x, y
        self.N = alg.max_degree
        self.horizon = self.N - self.q
        self._cent = {}
        self._readings = {}

    # -- primitive predicates ------------------------------------------

    def cent(self, m: int) -> bool:
        if m not in self._cent:
            self._cent[m] = centralizes(self.alg, self.y, m)
        return self._cent[m]

    def _w(self, m):
        """Spanning element of ``L_{m-1}`` or ``None`` when that is not one-dimensional."""
        if m < 2 or self.alg.dim(m - 1) != 1:
            return None
        return self.alg.basis(m - 1, 0)

    def fake1(self, m: int) -> bool:
        w = self._w(m)
        if w is None or self.alg.dim(m) != 1:
            return False
        wx = bracket(self.alg, w, self.x)
        return (bracket(self.alg, w, self.y).is_zero and not wx.is_zero
                and bracket(self.alg, wx, self.x).is_zero)

    def fake0(self, m: int) -> bool:
        w = self._w(m)
        if w is None or self.alg.dim(m) != 1:
            return False
        wy = bracket(self.alg, w, self.y)
        return (bracket(self.alg, w, self.x).is_zero and not wy.is_zero
                and bracket(self.alg, wy, self.y).is_zero)

    def genuine_type(self, m: int):
        """``(type or None, problem or None)`` for a two-dimensional ``L_m``."""
        alg, p, x, y = self.alg, self.p, self.x, self.y
        w = self._w(m)
        if w is None:
            return None, f"L_{m - 1} is not one-dimensional"
        if alg.dim(m + 1) != 1:
            return None, f"L_{m + 1} has dimension {alg.dim(m + 1)}"
        wx, wy = bracket(alg, w, x), bracket(alg, w, y)
        if not bracket(alg, wx, x).is_zero:
            return None, "[w x x] != 0: diamond without a type"
        if not bracket(alg, wy, y).is_zero:
            return None, "[w y y] != 0"
        u = alg.basis(m + 1, 0)
        c1 = _coefficient(bracket(alg, wx, y), u, p)
        c2 = _coefficient(bracket(alg, wy, x), u, p)
        if c1 == 0 and c2 == 0:
            return None, "[w x y] = [w y x] = 0"
        if (c1 + c2) % p == 0:
            return INFINITY, None
        return finite(c1 * inv(c1 + c2, p), p), None

    def readings(self, m: int) -> list:
        """All ways ``L_m`` is a diamond with a type (empty if none)."""
        if m not in self._readings:
            out = []
            d = self.alg.dim(m)
            if m == 1:
                pass
            elif d == 2:
                t, _ = self.genuine_type(m)
                if t is not None:
                    out.append(t)
            elif d == 1:
                if self.fake1(m):
                    out.append(FAKE1)
                if self.fake0(m):
                    out.append(FAKE0)
            self._readings[m] = out
        return self._readings[m]

    def has_type(self, m: int) -> bool:
        return bool(self.readings(m))

    def cent_range(self, lo: int, hi: int) -> bool:
        return all(self.cent(k) for k in range(lo, hi + 1))

    # -- diamonds ------------------------------------------------------

    def locate(self, violations: list | None = None) -> list:
        violations = [] if violations is None else violations
        alg = self.alg
        records = []
        consumed = set()
        for m in range(1, self.horizon + 1):
            d = alg.dim(m)
            if m == 1:
                records.append(DiamondRecord(1, d, FIRST))
                continue
            if d == 2:
                if alg.dim(m - 1) == 2:
                    violations.append(Violation("consecutive_diamonds", m, f"L_{m - 1} and L_{m} are both two-dimensional"))
                t, problem = self.genuine_type(m)
                if problem:
                    violations.append(Violation("diamond_type", m, problem))
                elif t.kind == "finite" and t.value in (0, 1):
                    violations.append(Violation("diamond_type", m, f"genuine diamond of type {t.value}"))
                records.append(DiamondRecord(m, d, GENUINE, t))
            elif d == 1:
                if m in consumed:
                    records.append(DiamondRecord(m, d, CHAIN, note=f"fake0 reading of the diamond at {m - 1}"))
                elif self.fake1(m):
                    alt = (m + 1, FAKE0) if self.fake0(m + 1) else None
                    if alt:
                        consumed.add(m + 1)
                    records.append(DiamondRecord(m, d, FAKE, FAKE1, alt))
                elif self.fake0(m):
                    alt = (m - 1, FAKE1) if self.fake1(m - 1) else None
                    records.append(DiamondRecord(m, d, FAKE, FAKE0, alt))
                else:
                    records.append(DiamondRecord(m, d, CHAIN))
            else:
                violations.append(Violation("component_dimension", m, f"dim L_{m} = {d}"))
                records.append(DiamondRecord(m, d, CHAIN))
        return records

    # -- centraliser runs ----------------------------------------------

    def runs(self, violations: list | None = None) -> "RunTable":
        violations = [] if violations is None else violations
        q, H = self.q, self.horizon
        cent = {m: self.cent(m) for m in range(1, H + 1)}
        runs = []
        m = 1
        while m <= H:
            if cent[m]:
                start = m
                while m + 1 <= H and cent[m + 1]:
                    m += 1
                runs.append({"start": start, "end": m, "length": m - start + 1,
                             "interior": start > 1 and m < H})
            m += 1
        noncent = [m for m in range(1, H + 1) if not cent[m]]
        checks = []
        for r in runs:
            start, end, length = r["start"], r["end"], r["length"]
            ok = length <= q - 1
            checks.append(("run_at_most_q_minus_1", start, ok))
            if not ok:
                violations.append(Violation("run_at_most_q_minus_1", start, f"y centralizes {length} consecutive components {start}..{end}"))
            if not r["interior"]:
                continue
            if length == q - 1:
                ok = self.fake0(start) and self.fake1(start + q - 1)
                checks.append(("maximal_run_flanked_by_fakes", start, ok))
                if not ok:
                    violations.append(Violation("maximal_run_flanked_by_fakes", start,
                                                f"run {start}..{end} is not preceded by a type-0 and followed by a type-1 diamond"))
            if length == q - 2:
                first = self.fake0(start) and any(t != FAKE1 for t in self.readings(start + q - 1))
                second = self.alg.dim(start - 1) == 2 and self.fake1(start + q - 2)
                ok = first or second
                checks.append(("run_q_minus_2_alternatives", start, ok))
                if not ok:
                    violations.append(Violation("run_q_minus_2_alternatives", start,
                                                f"run {start}..{end} of length q-2 fits neither alternative"))
            if length == q - 3 and self.alg.dim(start - 1) == 2:
                ok = any(t != FAKE1 and not (t.kind == "finite" and t.value == 1)
                         for t in self.readings(start + q - 2))
                checks.append(("run_after_genuine_diamond", start - 1, ok))
                if not ok:
                    violations.append(Violation("run_after_genuine_diamond", start - 1,
                                                f"L_{start + q - 2} is not a diamond with a type other than 1"))
        for m in range(1, H - 1):
            if not (cent[m] or cent[m + 1] or cent[m + 2]):
                violations.append(Violation("at_most_two_noncentralized", m,
                                            f"L_{m}, L_{m + 1}, L_{m + 2} are all not centralized by y"))
        return RunTable(runs, noncent, checks)


@dataclass
class RunTable:
    runs: list
    noncentralized: list
    checks: list = field(default_factory=list)

    def interior_lengths(self) -> list:
        return [r["length"] for r in self.runs if r["interior"]]


def _setup(alg, x=None, y=None) -> Analyzer:
    return Analyzer(alg, x=x, y=y)


def _setup_failure(exc) -> "TheoremVerdict":
    c = ClauseResult("standard_generators")
    c.violations.append(Violation(c.name, None, str(exc)))
    return TheoremVerdict({"setup": c})


def locate_diamonds(alg: GradedLieAlgebra, x, y, violations: list | None = None) -> list:
    """Per-degree :class:`DiamondRecord` list for degrees ``1..N-q``."""
    return _setup(alg, x, y).locate(violations)


def centralizer_runs(alg: GradedLieAlgebra, y, x=None, violations: list | None = None) -> RunTable:
    return _setup(alg, x, y).runs(violations)


# ---------------------------------------------------------------------------
# spacing
# ---------------------------------------------------------------------------

def distance_report(records: list, q: int) -> list:
    """One entry per consecutive pair of diamonds: raw degree gap and whether
    some admissible placement of the two diamonds makes the gap ``q - 1``."""
    diamonds = [r for r in records if r.is_diamond]
    out = []
    for a, b in zip(diamonds, diamonds[1:]):
        best = None
        for s in a.readings():
            for t in b.readings():
                if t - s == q - 1:
                    best = (s, t)
                    break
            if best:
                break
        out.append({"from": a.degree, "to": b.degree, "raw": b.degree - a.degree,
                    "ok": best is not None, "placement": list(best) if best else None})
    return out


@dataclass
class ClauseResult:
    name: str
    instances: list = field(default_factory=list)
    violations: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.violations

    def to_json(self):
        return {"name": self.name, "pass": self.passed, "instances": len(self.instances),
                "violations": [v.to_json() for v in self.violations]}


@dataclass
class TheoremVerdict:
    clauses: dict

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.clauses.values())

    @property
    def violations(self) -> list:
        return [v for c in self.clauses.values() for v in c.violations]

    def to_json(self):
        return {k: c.to_json() for k, c in self.clauses.items()}


def _main_theorem(an: Analyzer, records: list) -> TheoremVerdict:
    H, q = an.horizon, an.q
    a = ClauseResult("at_most_two_noncentralized")
    for m in range(1, H - 1):
        ok = an.cent(m) or an.cent(m + 1) or an.cent(m + 2)
        a.instances.append((m, ok))
        if not ok:
            a.violations.append(Violation(a.name, m, f"L_{m}..L_{m + 2} not centralized by y"))
    by_degree = {r.degree: r for r in records}
    b = ClauseResult("adjacent_noncentralized_is_typed_diamond")
    c = ClauseResult("isolated_noncentralized_gives_fake_pair")
    for m in range(2, H + 1):
        if not an.cent(m - 1) and not an.cent(m):
            rec = by_degree[m]
            ok = rec.classification == GENUINE and rec.type is not None
            b.instances.append((m, ok))
            if not ok:
                b.violations.append(Violation(b.name, m, f"[L_{m - 1} y] != 0 and [L_{m} y] != 0 but L_{m} is not a genuine diamond with a type"))
        if m >= 3 and an.cent(m - 2) and not an.cent(m - 1) and an.cent(m):
            ok = an.fake0(m) or an.fake1(m - 1)
            emitted = any(r.classification == FAKE and m in r.readings()
                          for r in (by_degree.get(m - 1), by_degree.get(m)) if r)
            c.instances.append((m, ok and emitted))
            if not (ok and emitted):
                c.violations.append(Violation(c.name, m, f"pattern 0/!=0/0 at {m - 2}..{m} without a type-0 diamond at {m}"))
    d = ClauseResult("consecutive_diamonds_differ_by_q_minus_1")
    for entry in distance_report(records, q):
        d.instances.append(entry)
        if not entry["ok"]:
            d.violations.append(Violation(d.name, entry["to"], f"diamonds at {entry['from']} and {entry['to']} cannot be placed q-1 apart"))
    return TheoremVerdict({"a": a, "b": b, "c": c, "d": d})


def verify_main_theorem(alg: GradedLieAlgebra, x=None, y=None) -> TheoremVerdict:
    """Check, up to degree ``N - q``: (a) no three consecutive components
    outside the centralizer of ``y``; (b) two consecutive ones force a genuine
    diamond with a type; (c) the 0 / !=0 / 0 pattern forces a fake pair;
    (d) consecutive diamonds are ``q - 1`` apart for a suitable placement of
    fake diamonds."""
    try:
        an = _setup(alg, x, y)
    except (NotNottinghamError, TruncationError) as exc:
        return _setup_failure(exc)
    return _main_theorem(an, an.locate())


def _reading_pairs(an: Analyzer, records: list) -> list:
    """``(degree, type)`` for every reading of every emitted diamond past L_1."""
    out = []
    for r in records:
        if r.classification in (GENUINE, FAKE) and r.type is not None:
            out.append((r.degree, r.type))
            if r.alternate is not None:
                out.append(r.alternate)
    return out


def _is_type(t: DiamondType, value) -> bool:
    return t.scalar == value if value is not None else t.kind == "infinity"


def _distance_theorem(an: Analyzer, records: list) -> TheoremVerdict:
    H, q = an.horizon, an.q
    nxt = ClauseResult("typed_diamond_after_run")
    for m, t in _reading_pairs(an, records):
        if m + q - 1 > H or not an.cent_range(m + 1, m + q - 3):
            continue
        if _is_type(t, 1) and an.cent(m + q - 2):
            continue
        ok = an.has_type(m + q - 1)
        nxt.instances.append((m, ok))
        if not ok:
            nxt.violations.append(Violation(nxt.name, m + q - 1, f"L_{m + q - 1} is not a diamond with a type"))

    chain = ClauseResult("run_propagates_past_diamond")
    for m, t in _reading_pairs(an, records):
        if m < 2 * q - 1 or m + q - 3 > H:
            continue
        if _is_type(t, -1 % an.p) or _is_type(t, 0):
            prev = an.readings(m - q + 1)
            if not prev:
                continue
            if _is_type(t, 0) and all(_is_type(s, 0) for s in prev):
                continue
        if not an.cent_range(m - q + 2, m - 2):
            continue
        ok = an.cent_range(m + 1, m + q - 3)
        chain.instances.append((m, ok))
        if not ok:
            chain.violations.append(Violation(chain.name, m, f"y fails to centralize L_{m + 1}..L_{m + q - 3}"))

    step = ClauseResult("next_diamond_after_noncentralized")
    for m in range(max(q, 3), H + 1):
        if not (an.cent(m - 2) and not an.cent(m - 1)) or m + q - 1 > H:
            continue
        if an.alg.dim(m) == 2:
            ok = an.cent_range(m + 1, m + q - 3) and an.has_type(m + q - 1)
        else:
            ok = ((an.cent_range(m, m + q - 3) and an.has_type(m + q - 1))
                  or (an.cent_range(m, m + q - 4) and an.has_type(m + q - 2)))
        step.instances.append((m, ok))
        if not ok:
            step.violations.append(Violation(step.name, m, f"no typed diamond q-1 (or q-2) past L_{m}"))
    return TheoremVerdict({"next_diamond": nxt, "chain": chain, "step": step})


def verify_distance_theorem(alg: GradedLieAlgebra, x=None, y=None) -> TheoremVerdict:
    """Check the run-propagation statements that imply the spacing result:
    a typed diamond follows every run of length ``q - 3`` after a diamond,
    runs of ``q - 3`` propagate from one diamond to the next, and every
    ``[L_{m-2} y] = 0 != [L_{m-1} y]`` is followed by a typed diamond
    ``q - 1`` (or, for fake ones, ``q - 2``) later."""
    try:
        an = _setup(alg, x, y)
    except (NotNottinghamError, TruncationError) as exc:
        return _setup_failure(exc)
    return _distance_theorem(an, an.locate())


# ---------------------------------------------------------------------------
# replaying the bracket computations behind the propagation step
# ---------------------------------------------------------------------------

@dataclass
class IdentityCheck:
    name: str
    params: dict
    holds: bool | None  # None: not applicable here
    detail: str = ""

    def to_json(self):
        status = "skipped" if self.holds is None else ("verified" if self.holds else "failed")
        return {"identity": self.name, "params": self.params, "status": status, "detail": self.detail}


@dataclass
class IdentityReport:
    m: int
    type: DiamondType | None
    checks: list

    @property
    def failed(self) -> list:
        return [c for c in self.checks if c.holds is False]

    @property
    def passed(self) -> bool:
        return not self.failed

    def get(self, name, **params):
        return [c for c in self.checks if c.name == name and all(c.params.get(k) == v for k, v in params.items())]


def _scaled_seed(alg, u, target, build):
    """Rescale ``u`` so that ``build(u) == target``; ``None`` if impossible."""
    got = build(u)
    if got.is_zero:
        return None
    c = _coefficient(target, got, alg.p)
    if c is None or c == 0:
        return None
    return c * u


def replay_chain_identities(alg: GradedLieAlgebra, m: int, x=None, y=None) -> IdentityReport:
    """Evaluate, at the diamond ``L_m``, the bracket identities that drive the
    proof that ``y`` centralizes ``L_{m+1} .. L_{m+q-3}``.

    Always: ``[v x y x^{h-1} y] = 0`` for ``0 < h <= q-3`` (``v`` spans
    ``L_{m-1}``) and the two coefficient identities expressing
    ``[u [y x^j y]]`` and ``[v [y x^h y]]`` as multiples of that element.
    For type -1 (resp. 0) with a typed predecessor ``L_{m-q+1}`` also the
    expansions of ``[u [v_1 x y x^{q-5} y]]`` (resp. ``x^{q-4}``).
    """
    an = _setup(alg, x, y)
    p, q, x, y = an.p, an.q, an.x, an.y
    if m + q > alg.max_degree:
        raise TruncationError(f"need m + q <= N, got m={m}, q={q}, N={alg.max_degree}")
    readings = an.readings(m)
    checks = []
    if not readings:
        return IdentityReport(m, None, [IdentityCheck("diamond_with_type", {}, False, f"L_{m} is not a diamond with a type")])
    mu = readings[0]
    v = _spanning(alg, m - 1)
    B = lambda *xs: bracket_seq(alg, *xs)

    def T(h):  # [v x y x^{h-1} y]
        return B(ad_power(alg, B(v, x, y), x, h - 1), y)

    for h in range(1, q - 2):
        checks.append(IdentityCheck("vanishing_chain", {"h": h}, T(h).is_zero))

    minv = mu.inverse
    if minv is not None:
        for h in range(1, q - 3):
            for j in range(h + 1, q - 2):
                deg_u = m - 1 - j + h
                if alg.dim(deg_u) != 1:
                    checks.append(IdentityCheck("pascal_combination", {"h": h, "j": j}, None, f"L_{deg_u} not one-dimensional"))
                    continue
                u = _scaled_seed(alg, alg.basis(deg_u, 0), v, lambda s: ad_power(alg, s, x, j - h))
                if u is None:
                    checks.append(IdentityCheck("pascal_combination", {"h": h, "j": j}, None, "[u x^(j-h)] does not span L_{m-1}"))
                    continue
                lhs = bracket(alg, u, B(ad_power(alg, y, x, j), y))
                coef = (fp_binom(j, h, p) * minv - fp_binom(j + 1, h, p)) % p
                if (j - h) % 2:
                    coef = -coef % p
                checks.append(IdentityCheck("pascal_combination", {"h": h, "j": j}, lhs == coef * T(h)))
        for h in range(1, q - 2):
            lhs = bracket(alg, v, B(ad_power(alg, y, x, h), y))
            coef = ((1 - (-1) ** h) * (minv - 1) - h) % p
            checks.append(IdentityCheck("self_combination", {"h": h}, lhs == coef * T(h)))

    prev = an.readings(m - q + 1) if m - q >= 1 else []
    v1 = ad_power(alg, y, x, q - 2)
    if m >= 2 * q - 1 and prev and (_is_type(mu, -1 % p) or _is_type(mu, 0)):
        lam = prev[0]
        checks.extend(_predecessor_identities(alg, an, m, v, v1, mu, lam))
    return IdentityReport(m, mu, checks)


def _predecessor_identities(alg, an, m, v, v1, mu, lam) -> list:
    p, q, x, y = an.p, an.q, an.x, an.y
    B = lambda *xs: bracket_seq(alg, *xs)
    out = []
    u0 = alg.basis(m - q, 0) if alg.dim(m - q) == 1 else None
    if u0 is None:
        return [IdentityCheck("predecessor_setup", {}, None, f"L_{m - q} not one-dimensional")]
    v1x = B(v1, x)
    linv = lam.inverse
    if _is_type(mu, -1 % p):
        T = B(ad_power(alg, B(v, x, y), x, q - 5), y)
        inner = ad_power(alg, B(v1, x, y), x, q - 5)
        if linv is None:  # predecessor of type 0
            u = _scaled_seed(alg, u0, v, lambda s: ad_power(alg, B(s, y), x, q - 2))
            if u is None:
                return [IdentityCheck("predecessor_setup", {}, None, "[u y x^(q-2)] does not span L_{m-1}")]
            t1, t2 = 2, -1
            out.append(IdentityCheck("seed_relations", {}, B(u, x).is_zero and B(u, y, y).is_zero))
        else:
            u = _scaled_seed(alg, u0, v, lambda s: ad_power(alg, B(s, x, y), x, q - 3))
            if u is None:
                return [IdentityCheck("predecessor_setup", {}, None, "[u x y x^(q-3)] does not span L_{m-1}")]
            out.append(IdentityCheck("seed_relations", {},
                                     B(u, x, x).is_zero and B(u, y, y).is_zero
                                     and B(u, y, x) == ((linv - 1) % p) * B(u, x, y)))
            out.append(IdentityCheck("aux_u_v1x", {}, bracket(alg, u, v1x) == linv * B(v, x)))
            out.append(IdentityCheck("aux_ux_v1x", {}, B(u, x, v1x).is_zero))
            out.append(IdentityCheck("aux_uy_v1x", {}, B(u, y, v1x) == ((1 - linv) % p) * B(v, x, y)))
            out.append(IdentityCheck("aux_uxy_v1x", {}, B(u, x, y, v1x) == -B(v, x, y, x)))
            t1, t2 = (2 * linv + 4) % p, -(linv - 1) % p
        first = B(u, inner, y)
        second = B(u, y, inner)
        out.append(IdentityCheck("expansion_split", {}, bracket(alg, u, B(inner, y)) == first - second))
        out.append(IdentityCheck("expansion_first_term", {"coefficient": t1 % p}, first == t1 * T))
        out.append(IdentityCheck("expansion_second_term", {"coefficient": t2 % p}, second == t2 * T))
        out.append(IdentityCheck("propagation_conclusion", {"coefficient": (t1 - t2) % p}, ((t1 - t2) * T).is_zero))
    else:  # mu == 0
        if linv is None:
            return [IdentityCheck("predecessor_setup", {}, None, "predecessor has type 0")]
        T = B(ad_power(alg, B(v, y), x, q - 3), y)
        inner = ad_power(alg, B(v1, x, y), x, q - 4)
        u = _scaled_seed(alg, u0, v, lambda s: ad_power(alg, B(s, x, y), x, q - 3))
        if u is None:
            return [IdentityCheck("predecessor_setup", {}, None, "[u x y x^(q-3)] does not span L_{m-1}")]
        t1, t2 = -(linv + 3) % p, -(linv - 1) % p
        first = B(u, inner, y)
        second = B(u, y, inner)
        out.append(IdentityCheck("expansion_split", {}, bracket(alg, u, B(inner, y)) == first - second))
        out.append(IdentityCheck("expansion_first_term", {"coefficient": t1}, first == t1 * T))
        out.append(IdentityCheck("expansion_second_term", {"coefficient": t2}, second == t2 * T))
        out.append(IdentityCheck("propagation_conclusion", {"coefficient": (t1 - t2) % p}, ((t1 - t2) * T).is_zero))
    return out


# ---------------------------------------------------------------------------
# global verdicts
# ---------------------------------------------------------------------------

def covering_failures(alg: GradedLieAlgebra, up_to: int | None = None) -> list:
    """Degrees ``i <= up_to`` where some nonzero ``z`` in ``L_i`` has ``[z L_1] != L_{i+1}``."""
    p = alg.p
    up_to = alg.max_degree - 1 if up_to is None else up_to
    bad = []
    acts = None
    for i in range(1, up_to + 1):
        d, dn = alg.dim(i), alg.dim(i + 1)
        if d == 0 or d > 2 or dn > 2:
            bad.append(i)
            continue
        acts = [alg.right_action(i, alg.basis(1, k)) for k in range(alg.dim(1))]
        if d == 1:
            points = [np.array([1])]
        else:
            points = [np.array([1, t]) for t in range(p)] + [np.array([0, 1])]
        for z in points:
            M = np.stack([z @ A % p for A in acts])
            if rank(M, p) != dn:
                bad.append(i)
                break
    return bad


@dataclass
class NottinghamVerdict:
    passed: bool
    q: int | None
    checks: list  # of (name, ok, detail)

    def failures(self):
        return [c for c in self.checks if not c[1]]


def is_nottingham(alg: GradedLieAlgebra) -> NottinghamVerdict:
    """Composite check that ``alg`` (as far as stored) is a Nottingham algebra."""
    p, N = alg.p, alg.max_degree
    checks = []

    def add(name, ok, detail=""):
        checks.append((name, bool(ok), detail))
        return ok

    add("p > 3", p > 3, f"p = {p}")
    add("dim L_1 = 2", alg.dim(1) == 2, f"dim L_1 = {alg.dim(1)}")
    zeros = [m for m in range(1, N + 1) if alg.dim(m) == 0]
    add("no zero component", not zeros, f"first zero component at {zeros[0]}" if zeros else "")
    cov = covering_failures(alg)
    add("covering property", not cov, f"fails in degrees {cov[:5]}" if cov else "")
    pairs = [m for m in range(1, N) if alg.dim(m) == 2 and alg.dim(m + 1) == 2]
    add("no consecutive diamonds", not pairs, f"at {pairs[:5]}" if pairs else "")
    q = None
    try:
        q = detect_q(alg)
        add("second diamond at q > 5, a power of p", True, f"q = {q}")
    except NotNottinghamError as exc:
        add("second diamond at q > 5, a power of p", False, str(exc))
    if alg.q is not None and q is not None and alg.q != q:
        add("metadata q matches", False, f"metadata q = {alg.q}, detected {q}")
    if alg.dim(1) != 2 or q is None:
        return NottinghamVerdict(False, q, checks)
    try:
        y = find_sandwich_y(alg)
        add("(ad y)^2 = 0", True)
    except NotNottinghamError as exc:
        add("(ad y)^2 = 0", False, str(exc))
        return NottinghamVerdict(False, q, checks)
    try:
        x, y = normalize_generators(alg, y, q)
        add("standard generators", True)
    except (NotNottinghamError, TruncationError) as exc:
        add("standard generators", False, str(exc))
        return NottinghamVerdict(False, q, checks)
    bad_x = [m for m in range(1, N - q + 1) if np.any(_ad_matrix_power(alg, m, x, q))]
    add("(ad x)^q = 0", not bad_x, f"fails in degrees {bad_x[:5]}" if bad_x else "")
    bad_y = [m for m in range(2, q - 1) if not centralizes(alg, y, m)]
    add("y centralizes L_2..L_{q-2}", not bad_y, f"fails at {bad_y}" if bad_y else "")
    return NottinghamVerdict(all(c[1] for c in checks), q, checks)


def _ad_matrix_power(alg, m, g, k):
    M = np.eye(alg.dim(m), dtype=np.int64)
    for s in range(k):
        M = M @ alg.right_action(m + s, g) % alg.p
    return M


# ---------------------------------------------------------------------------
# report
# ---------------------------------------------------------------------------

@dataclass
class AnalysisReport:
    p: int
    q: int | None
    horizon: int | None
    thin: bool
    x: tuple | None
    y: tuple | None
    components: list
    distances: list
    runs: list
    violations: list
    checks: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return not self.violations

    def diamonds(self) -> list:
        return [r for r in self.components if r.is_diamond]

    def to_dict(self) -> dict:
        return {
            "q": self.q,
            "horizon": self.horizon,
            "thin": self.thin,
            "x": list(self.x) if self.x else None,
            "y": list(self.y) if self.y else None,
            "components": [r.to_json(self.p) for r in self.components],
            "distances": [d["raw"] for d in self.distances],
            "placements": [d["placement"] for d in self.distances],
            "runs": self.runs,
            "checks": self.checks,
            "violations": [v.to_json() for v in self.violations],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), separators=(",", ":")) + "\n"


def analyze(alg: GradedLieAlgebra) -> AnalysisReport:
    violations = []
    cov = covering_failures(alg)
    thin = alg.dim(1) == 2 and not cov
    for i in cov:
        violations.append(Violation("covering", i, f"covering property fails from L_{i} to L_{i + 1}"))

    def bail(q=None):
        return AnalysisReport(alg.p, q, None, thin, None, None, [], [], [], violations)

    try:
        q = detect_q(alg)
    except NotNottinghamError as exc:
        violations.append(Violation("second_diamond", None, str(exc)))
        return bail()
    if alg.q is not None and alg.q != q:
        violations.append(Violation("second_diamond", q, f"metadata q = {alg.q}, detected {q}"))
    if alg.max_degree < 2 * q:
        violations.append(Violation("window", None, f"max_degree {alg.max_degree} < 2q"))
        return bail(q)
    try:
        an = Analyzer(alg, q=q)
    except NotNottinghamError as exc:
        violations.append(Violation("standard_generators", None, str(exc)))
        return bail(q)

    for m in range(1, alg.max_degree - q + 1):
        if np.any(_ad_matrix_power(alg, m, an.x, q)):
            violations.append(Violation("ad_x_power_q", m, f"(ad x)^q != 0 on L_{m}"))
    for m in range(2, q - 1):
        if not an.cent(m):
            violations.append(Violation("y_centralizes_initial", m, f"[L_{m} y] != 0"))

    records = an.locate(violations)
    second = next((r for r in records if r.degree == q), None)
    if second is not None and second.type != finite(-1, alg.p):
        violations.append(Violation("second_diamond_type", q, f"type {second.type} instead of -1"))
    table = an.runs(violations)
    main = _main_theorem(an, records)
    dist = _distance_theorem(an, records)
    seen = set(violations)
    for v in main.violations + dist.violations:
        if v not in seen:
            violations.append(v)
            seen.add(v)
    checks = {"main": main.to_json(), "propagation": dist.to_json()}
    return AnalysisReport(alg.p, q, an.horizon, thin, an.x.coords, an.y.coords, records,
                          distance_report(records, q), table.runs, violations, checks)


def render_table(report: AnalysisReport) -> str:
    """Fixed-width table: degree | dim | class | type | distance to previous diamond."""
    p = report.p
    rows = [("degree", "dim", "class", "type", "distance")]
    prev = None
    for r in report.components:
        if r.type is None:
            typ = "-"
        else:
            typ = r.type.label(p)
            if r.alternate is not None:
                typ += f" (alt: {r.alternate[1].label(p)}@{r.alternate[0]})"
        dist = "-"
        if r.is_diamond:
            if prev is not None:
                dist = str(r.degree - prev)
            prev = r.degree
        rows.append((str(r.degree), str(r.dim), r.classification, typ, dist))
    widths = [max(len(row[k]) for row in rows) for k in range(5)]
    lines = [" | ".join(cell.rjust(w) if k < 2 or k == 4 else cell.ljust(w)
                        for k, (cell, w) in enumerate(zip(row, widths))).rstrip()
             for row in rows]
    lines.insert(1, "-+-".join("-" * w for w in widths))
    head = [f"p = {p}, q = {report.q}, horizon = {report.horizon}, thin = {report.thin}",
            f"x = {list(report.x) if report.x else None}, y = {list(report.y) if report.y else None}"]
    tail = [f"violations: {len(report.violations)}"] + [f"  {v.check} @ {v.degree}: {v.detail}" for v in report.violations]
    return "\n".join(head + lines + tail) + "\n"
