"""Presentations and the graded nilpotent quotient.

Presentation text is line oriented::

    # comment
    p = 7
    generators = x y
    relator = [y,x,y]
    relator = [y,x^2,y] + 2*[y,x,y,x]

The quotient is built one degree at a time.  Degree ``m`` starts as the
space of symbols ``[b, g]`` (``b`` a basis element of ``L_{m-1}``, ``g`` a
generator).  Brackets ``[L_i, L_j]`` with ``i + j = m`` are pushed into that
space by ``[a, [c, g]] = [[a, c], g] - [[a, g], c]``, and ``L_m`` is the
quotient by antisymmetry, Jacobi on basis triples and the degree-``m``
relators.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field

import numpy as np

from .errors import (DomainError, PresentationSyntaxError,
                     UnknownGeneratorError)
from .liecore import GradedLieAlgebra, HomogeneousElement, LeftNormedWord, eval_word
from .linalg import quotient_projection, rref
from .modp import require_prime

_NAME = r"[A-Za-z_][A-Za-z0-9_]*"
_TOKEN = re.compile(rf"\s*(?:(?P<int>\d+)|(?P<name>{_NAME})|(?P<op>[\[\],^*+\-]))")


@dataclass(frozen=True)
class Relator:
    terms: tuple  # of (int coefficient, LeftNormedWord)
    line: int | None = None

    @property
    def degree(self) -> int:
        _, w = self.terms[0]
        return 1 + sum(k for _, k in w.letters)

    def __str__(self):
        parts = []
        for c, w in self.terms:
            parts.append(f"{c}*{w}")
        return " + ".join(parts)


@dataclass
class Presentation:
    p: int
    generators: tuple
    relators: list = field(default_factory=list)

    def __post_init__(self):
        require_prime(self.p)
        if len(set(self.generators)) != len(self.generators):
            raise DomainError("generator names must be distinct")


def word_degree(w: LeftNormedWord) -> int:
    return 1 + sum(k for _, k in w.letters)


class _Lexer:
    def __init__(self, text, lineno, offset):
        self.text = text
        self.lineno = lineno
        self.offset = offset
        self.pos = 0

    def column(self):
        # skip whitespace so the column points at the next token
        pos = self.pos
        while pos < len(self.text) and self.text[pos].isspace():
            pos += 1
        return self.offset + pos + 1

    def error(self, msg):
        raise PresentationSyntaxError(msg, self.lineno, self.column())

    def peek(self):
        m = _TOKEN.match(self.text, self.pos)
        if not m:
            if self.text[self.pos:].strip():
                self.error(f"unexpected character {self.text[self.pos:].strip()[0]!r}")
            return None, None
        kind = m.lastgroup
        return kind, m.group(kind)

    def take(self):
        col = self.column()
        m = _TOKEN.match(self.text, self.pos)
        if not m:
            self.error("unexpected end of input")
        self.pos = m.end()
        return m.lastgroup, m.group(m.lastgroup), col

    def expect(self, value):
        kind, tok, col = self.take()
        if tok != value:
            raise PresentationSyntaxError(f"expected {value!r}, found {tok!r}", self.lineno, col)

    def at_end(self):
        return not self.text[self.pos:].strip()


def _parse_letter(lex):
    kind, tok, col = lex.take()
    if kind != "name":
        raise PresentationSyntaxError(f"expected a generator name, found {tok!r}", lex.lineno, col)
    exp = 1
    if lex.peek()[1] == "^":
        lex.take()
        kind, val, ecol = lex.take()
        if kind != "int" or int(val) < 1:
            raise PresentationSyntaxError(f"exponent must be a positive integer, found {val!r}", lex.lineno, ecol)
        exp = int(val)
    return tok, exp, col


def _parse_word(lex):
    lex.expect("[")
    letters = [_parse_letter(lex)]
    while lex.peek()[1] == ",":
        lex.take()
        letters.append(_parse_letter(lex))
    lex.expect("]")
    (seed, k0, _), rest = letters[0], letters[1:]
    body = ([(seed, k0 - 1)] if k0 > 1 else []) + [(n, k) for n, k, _ in rest]
    return LeftNormedWord(seed, tuple(body)), [(n, c) for n, _, c in letters]


def _parse_combination(lex):
    """``[+|-] [int [*]] word`` terms joined by ``+`` / ``-``."""
    terms = []
    names = []
    first = True
    while True:
        sign = 1
        kind, tok = lex.peek()
        if tok in ("+", "-"):
            lex.take()
            sign = -1 if tok == "-" else 1
        elif not first:
            lex.error(f"expected '+' or '-', found {tok!r}")
        coef = 1
        kind, tok = lex.peek()
        if kind == "int":
            coef = int(lex.take()[1])
            if lex.peek()[1] == "*":
                lex.take()
        if lex.peek()[1] != "[":
            lex.error("expected '[' to start a word")
        w, used = _parse_word(lex)
        terms.append((sign * coef, w))
        names.extend(used)
        first = False
        if lex.at_end():
            return terms, names


def parse_word(text: str) -> LeftNormedWord:
    """Parse a single word such as ``[y,x^5,y]``."""
    lex = _Lexer(text, None, 0)
    w, _ = _parse_word(lex)
    if not lex.at_end():
        lex.error("trailing input after word")
    return w


def parse_presentation(text: str) -> Presentation:
    p = None
    gens = None
    pending = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0]
        if not line.strip():
            continue
        if "=" not in line:
            raise PresentationSyntaxError("expected 'key = value'", lineno, len(line) - len(line.lstrip()) + 1)
        key, value = line.split("=", 1)
        offset = len(key) + 1
        key = key.strip()
        if key == "p":
            if not re.fullmatch(r"\s*\d+\s*", value):
                raise PresentationSyntaxError("p must be an integer", lineno, offset + 1)
            if p is not None:
                raise PresentationSyntaxError("p given twice", lineno, 1)
            p = int(value)
        elif key == "generators":
            if gens is not None:
                raise PresentationSyntaxError("generators given twice", lineno, 1)
            names = []
            for tok in re.finditer(r"[^\s,]+", value):
                n, col = tok.group(), offset + tok.start() + 1
                if not re.fullmatch(_NAME, n):
                    raise PresentationSyntaxError(f"bad generator name {n!r}", lineno, col)
                if n in names:
                    raise PresentationSyntaxError(f"generator {n!r} listed twice", lineno, col)
                names.append(n)
            gens = tuple(names)
        elif key == "relator":
            lex = _Lexer(value, lineno, offset)
            if lex.at_end():
                raise PresentationSyntaxError("empty relator", lineno, offset + 1)
            terms, names = _parse_combination(lex)
            pending.append((lineno, terms, names))
        else:
            raise PresentationSyntaxError(f"unknown key {key!r}", lineno, len(raw) - len(raw.lstrip()) + 1)
    if p is None:
        raise PresentationSyntaxError("missing 'p = <prime>' line")
    if not gens:
        raise PresentationSyntaxError("missing or empty 'generators = ...' line")
    try:
        require_prime(p)
    except ValueError as exc:
        raise PresentationSyntaxError(str(exc)) from None
    relators = []
    for lineno, terms, names in pending:
        for n, col in names:
            if n not in gens:
                raise PresentationSyntaxError(f"unknown generator {n!r}", lineno, col)
        degs = {word_degree(w) for _, w in terms}
        if len(degs) != 1:
            raise PresentationSyntaxError(f"relator is not homogeneous (degrees {sorted(degs)})", lineno)
        if degs.pop() < 2:
            raise PresentationSyntaxError("relator words must have degree at least 2", lineno)
        relators.append(Relator(tuple(terms), lineno))
    return Presentation(p, gens, relators)


# ---------------------------------------------------------------------------
# engine
# ---------------------------------------------------------------------------

class _Quotient:
    def __init__(self, pres: Presentation):
        self.p = pres.p
        self.gens = pres.generators
        self.ngen = len(self.gens)
        self.dims = {1: self.ngen}
        self.tables = {}   # (i, j) -> (d_i, d_j, d_{i+j}), both orders kept
        self.symbols = {}  # m -> list of (b, g) spanning symbols chosen as basis

    def T(self, i, j):
        return self.tables[(i, j)]

    def unit_symbols(self, vec_block, g_idx, m):
        """Place ``vec_block[..., k]`` (coords in L_{m-1}) at symbol positions ``(k, g)``."""
        S = self.dims[m - 1] * self.ngen
        lead = vec_block.shape[:-1]
        out = np.zeros(lead + (S,), dtype=np.int64)
        d = self.dims[m - 1]
        cols = np.arange(d)[None, :] * self.ngen + np.asarray(g_idx)[:, None]  # per b
        # vec_block has shape (A, B, d) with g_idx of length B
        for bi in range(vec_block.shape[1]):
            out[:, bi, cols[bi]] = vec_block[:, bi, :]
        return out

    def phi_tables(self, m):
        """Bracket ``[L_i, L_j] -> symbol space of degree m`` for every ``i + j = m``."""
        p, ngen = self.p, self.ngen
        S = self.dims[m - 1] * ngen
        phi = {}
        d1 = self.dims[m - 1]
        phi[(m - 1, 1)] = np.eye(S, dtype=np.int64).reshape(d1, ngen, S)
        for j in range(2, m):
            i = m - j
            di, dj = self.dims[i], self.dims[j]
            if di == 0 or dj == 0:
                phi[(i, j)] = np.zeros((di, dj, S), dtype=np.int64)
                continue
            c_idx = [c for c, _ in self.symbols[j]]
            g_idx = [g for _, g in self.symbols[j]]
            # [[a, c], g]
            ac = self.T(i, j - 1)[:, c_idx, :]
            first = self.unit_symbols(ac, g_idx, m)
            # [[a, g], c]
            ag = self.T(i, 1)[:, g_idx, :]
            second = np.einsum("abk,kbs->abs", ag, phi[(i + 1, j - 1)][:, c_idx, :])
            phi[(i, j)] = (first - second) % p
        return phi

    def relator_rows(self, m, relators):
        S = self.dims[m - 1] * self.ngen
        rows = []
        for r in relators:
            if r.degree != m:
                continue
            acc = np.zeros(S, dtype=np.int64)
            for coef, w in r.terms:
                letters = [w.seed] + w.expanded()
                vec = np.zeros(self.ngen, dtype=np.int64)
                vec[self.gens.index(letters[0])] = 1
                for k, name in enumerate(letters[1:-1], start=1):
                    vec = vec @ self.T(k, 1)[:, self.gens.index(name), :] % self.p
                last = self.gens.index(letters[-1])
                sym = np.zeros(S, dtype=np.int64)
                sym[np.arange(self.dims[m - 1]) * self.ngen + last] = vec
                acc = acc + coef * sym
            rows.append(acc % self.p)
        return rows

    def step(self, m, relators):
        p = self.p
        S = self.dims[m - 1] * self.ngen
        if S == 0:
            self.dims[m] = 0
            self.symbols[m] = []
            for i in range(1, m):
                self.tables[(i, m - i)] = np.zeros((self.dims[i], self.dims[m - i], 0), dtype=np.int64)
            return
        phi = self.phi_tables(m)
        rows = []
        for i in range(1, m // 2 + 1):
            j = m - i
            block = phi[(i, j)] + np.transpose(phi[(j, i)], (1, 0, 2))
            rows.append(block.reshape(-1, S))
        for i in range(1, m // 3 + 1):
            for j in range(i, (m - i) // 2 + 1):
                k = m - i - j
                if k < j or not (self.dims[i] and self.dims[j] and self.dims[k]):
                    continue
                t1 = np.einsum("bct,ats->abcs", self.T(j, k), phi[(i, j + k)])
                t2 = np.einsum("cat,bts->abcs", self.T(k, i), phi[(j, k + i)])
                t3 = np.einsum("abt,cts->abcs", self.T(i, j), phi[(k, i + j)])
                rows.append(((t1 + t2 + t3) % p).reshape(-1, S))
        rows.extend(r[None, :] for r in self.relator_rows(m, relators))
        M = np.concatenate(rows, axis=0) % p
        M = M[np.any(M, axis=1)]
        if M.shape[0]:
            M = np.unique(M, axis=0)
            R, piv = rref(M, p)
        else:
            R, piv = np.zeros((0, S), dtype=np.int64), []
        P, free = quotient_projection(R, piv, S, p)
        self.dims[m] = len(free)
        self.symbols[m] = [divmod(s, self.ngen) for s in free]
        for (i, j), arr in phi.items():
            self.tables[(i, j)] = (arr @ P) % p

    def algebra(self, N):
        dims = [self.dims[m] for m in range(1, N + 1)]
        tables = {(i, j): arr for (i, j), arr in self.tables.items() if i <= j}
        gens = {g: tuple(int(k == n) for k in range(self.ngen)) for n, g in enumerate(self.gens)}
        return GradedLieAlgebra(self.p, dims, tables, generators=gens)


def graded_quotient(pres: Presentation, N: int) -> GradedLieAlgebra:
    """Largest graded Lie algebra generated in degree 1 by ``pres.generators``
    satisfying ``pres.relators``, truncated at degree ``N``."""
    if N < 2:
        raise DomainError(f"cutoff must be at least 2, got {N}")
    if not pres.generators:
        raise DomainError("presentation has no generators")
    for r in pres.relators:
        for _, w in r.terms:
            for name in [w.seed] + [n for n, _ in w.letters]:
                if name not in pres.generators:
                    raise UnknownGeneratorError(f"unknown generator {name!r} in relator")
    eng = _Quotient(pres)
    for m in range(2, N + 1):
        eng.step(m, pres.relators)
    return eng.algebra(N)


def evaluate_relator(alg: GradedLieAlgebra, r: Relator) -> HomogeneousElement:
    total = None
    for coef, w in r.terms:
        term = coef * eval_word(alg, w)
        total = term if total is None else total + term
    return total
