"""Command line interface: ``diamondlab <subcommand> ...``.

Exit codes: 0 everything checked passed, 1 a mathematical violation was
found, 2 usage / IO / schema error (one-line diagnostic on stderr).
"""
from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from . import construct, diamond, liecore, modp, nilquot
from .errors import DiamondLabError

THREADS_VAR = "DIAMONDLAB_THREADS"


class UsageError(Exception):
    pass


def thread_cap(environ=os.environ) -> int:
    """Parallelism cap from the environment (default 1; all checks currently run serially)."""
    raw = environ.get(THREADS_VAR)
    if raw is None or raw == "":
        return 1
    try:
        n = int(raw)
    except ValueError:
        raise UsageError(f"{THREADS_VAR} must be a positive integer, got {raw!r}") from None
    if n < 1:
        raise UsageError(f"{THREADS_VAR} must be a positive integer, got {raw!r}")
    return n


def _emit(text: str, path=None):
    if path is None:
        sys.stdout.write(text)
    else:
        Path(path).write_text(text)


def render_table(report) -> str:
    return diamond.render_table(report)


# -- subcommands -------------------------------------------------------------

def cmd_construct(args) -> int:
    alg = construct.loop_nottingham(args.p, args.n, args.max_degree)
    _emit(liecore.dumps(alg), args.out)
    return 0


def cmd_nq(args) -> int:
    pres = nilquot.parse_presentation(Path(args.presentation).read_text())
    alg = nilquot.graded_quotient(pres, args.max_degree)
    _emit(liecore.dumps(alg), args.out)
    if args.out is not None:
        print("dims " + " ".join(map(str, alg.dims)))
    return 0


def cmd_analyze(args) -> int:
    alg = liecore.load(args.algebra)
    report = diamond.analyze(alg)
    text = report.to_json() if args.format == "json" else render_table(report)
    _emit(text, args.report)
    if args.report is not None:
        print(f"q={report.q} diamonds={len(report.diamonds())} violations={len(report.violations)}")
    return 0 if report.passed else 1


def cmd_check(args) -> int:
    alg = liecore.load(args.algebra)
    bad = liecore.jacobi_audit(alg)
    print(f"jacobi: {'ok' if not bad else f'{len(bad)} failing triples, first {bad[0]}'}")
    verdict = diamond.is_nottingham(alg)
    for name, ok, detail in verdict.checks:
        print(f"{'PASS' if ok else 'FAIL'} {name}" + (f" ({detail})" if detail else ""))
    print(f"nottingham: {'yes' if verdict.passed else 'no'}")
    return 0 if verdict.passed and not bad else 1


def _lemma_output(report) -> int:
    print(json.dumps(report.to_dict(), separators=(",", ":")))
    return 0 if report.passed else 1


def cmd_lemmas(args) -> int:
    if args.lemma == "binomial":
        if args.p is None or args.n_max is None:
            raise UsageError("lemmas binomial needs --p and --n-max")
        return _lemma_output(modp.check_binomial_lemma(args.p, args.n_max))
    if args.lemma == "invert":
        if args.q is None:
            raise UsageError("lemmas invert needs --q")
        qp = modp.PrimePower.from_q(args.q)
        qp.check_nottingham_regime()
        return _lemma_output(modp.check_invert_symmetry(qp, q_bound=max(args.q, modp.DEFAULT_Q_BOUND)))
    if args.p is None:
        raise UsageError("lemmas lucas needs --p")
    return _lemma_output(modp.check_lucas(args.p))


def _operand(alg, text):
    text = text.strip()
    if not text.startswith("["):
        return alg.generator(text)
    return liecore.eval_word(alg, nilquot.parse_word(text))


def cmd_expand(args) -> int:
    alg = liecore.load(args.algebra)
    res = liecore.gen_jacobi_expand(alg, _operand(alg, args.a), _operand(alg, args.b),
                                    _operand(alg, args.c), args.n)
    print(json.dumps({"degree": res.lhs.degree, "lhs": list(res.lhs.coords), "rhs": list(res.rhs.coords),
                      "coefficients": res.coefficients, "equal": res.equal}, separators=(",", ":")))
    return 0 if res.equal else 1


# -- parser ------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="diamondlab", description="Nottingham Lie algebra toolkit")
    sub = ap.add_subparsers(dest="command", required=True)

    c = sub.add_parser("construct", help="build a known algebra")
    c.add_argument("family", choices=["zassenhaus-loop"])
    c.add_argument("--p", type=int, required=True)
    c.add_argument("--n", type=int, required=True)
    c.add_argument("--max-degree", type=int, required=True)
    c.add_argument("--out")
    c.set_defaults(func=cmd_construct)

    q = sub.add_parser("nq", help="graded quotient of a finite presentation")
    q.add_argument("--presentation", required=True)
    q.add_argument("--max-degree", type=int, required=True)
    q.add_argument("--out")
    q.set_defaults(func=cmd_nq)

    a = sub.add_parser("analyze", help="diamond report for an algebra file")
    a.add_argument("algebra")
    a.add_argument("--report")
    a.add_argument("--format", choices=["json", "table"], default="json")
    a.set_defaults(func=cmd_analyze)

    k = sub.add_parser("check", help="Jacobi audit and Nottingham verdict")
    k.add_argument("algebra")
    k.set_defaults(func=cmd_check)

    lm = sub.add_parser("lemmas", help="exhaustive arithmetic checks")
    lm.add_argument("lemma", choices=["binomial", "invert", "lucas"])
    lm.add_argument("--p", type=int)
    lm.add_argument("--n-max", type=int)
    lm.add_argument("--q", type=int)
    lm.set_defaults(func=cmd_lemmas)

    e = sub.add_parser("expand", help="check the generalized Jacobi expansion [a [b c^n]]")
    e.add_argument("algebra")
    e.add_argument("--a", required=True)
    e.add_argument("--b", required=True)
    e.add_argument("--c", required=True)
    e.add_argument("--n", type=int, required=True)
    e.set_defaults(func=cmd_expand)
    return ap


def run(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        thread_cap()
        return args.func(args)
    except (UsageError, DiamondLabError, OSError, ValueError, KeyError) as exc:
        msg = exc.args[0] if isinstance(exc, KeyError) and exc.args else exc
        print(f"diamondlab: error: {msg}", file=sys.stderr)
        return 2


def main(argv=None):
    sys.exit(run(argv))


if __name__ == "__main__":
    main()
