"""Command-line front end: ``qident {eval,verify,limit,list}``.

Exit status: 0 success, 1 a verification or limit study failed, 2 usage
error, 3 a domain or convergence error aborted an evaluation.  Reports go
to stdout (or ``--output``); diagnostics go to stderr.
"""

from __future__ import annotations

import argparse
import os
import sys
from pathlib import Path

import mpmath
from mpmath import mp, mpf

from . import kernel
from .catalog import Form, builtin_catalog, lookup, parse_catalog, pseudo_records
from .errors import DomainError, InvalidParams, NonConvergence, ParseError
from .numeric import PrecisionContext, SumResult, parse_exact
from .outcome import Status
from .report import format_number, render_limit_study, render_report
from .verify import DEFAULT_GRID, limit_study, verify_grid

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_ABORT = 0, 1, 2, 3
PRECISION_ENV = "QIDENT_PRECISION_BITS"


class UsageError(Exception):
    pass


# ---------------------------------------------------------------------------
# argument types


def _rational(text: str):
    try:
        return parse_exact(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _q_value(text: str):
    v = _rational(text)
    if not 0 < v < 1:
        raise argparse.ArgumentTypeError(f"q must lie in (0, 1), got {text}")
    return v


def _q_list(text: str):
    return [_q_value(t) for t in text.split(",") if t.strip()]


def _precision(text: str) -> int:
    try:
        bits = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"precision must be an integer, got {text!r}") from None
    if bits < 64:
        raise argparse.ArgumentTypeError(f"precision must be >= 64 bits, got {bits}")
    return bits


def _k_range(text: str):
    lo, sep, hi = text.partition("..")
    try:
        a, b = int(lo), int(hi)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a..b, got {text!r}") from None
    if not sep or not 1 <= a <= b:
        raise argparse.ArgumentTypeError(f"expected 1 <= a <= b in a..b, got {text!r}")
    return a, b


def _ids(text: str):
    return [t.strip() for t in text.split(",") if t.strip()]


# ---------------------------------------------------------------------------
# parser


def _default_precision() -> int:
    raw = os.environ.get(PRECISION_ENV)
    if raw is None:
        return 256
    try:
        return _precision(raw)
    except argparse.ArgumentTypeError as exc:
        raise UsageError(f"{PRECISION_ENV}: {exc}") from None


def _add_ctx_flags(p, default_bits):
    p.add_argument("--precision", type=_precision, default=default_bits,
                   help=f"working precision in bits (default {default_bits}, env {PRECISION_ENV})")
    p.add_argument("--tol", type=_rational, default=None, help="relative tolerance, e.g. 1e-30")
    p.add_argument("--max-terms", type=int, default=None, help="term/factor cap per series or product")


EVAL_ARGS = {
    "q_int": ("x",),
    "q_factorial": ("n",),
    "poch_finite": ("z", "n"),
    "poch_infinite": ("z",),
    "q_gamma": ("x",),
    "poch_general": ("x", "alpha"),
    "sin_q": ("x",),
    "pi_q": (),
}


def build_parser(default_bits: int = 256) -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="qident", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("eval", help="evaluate one kernel function")
    p.add_argument("function", choices=sorted(EVAL_ARGS))
    p.add_argument("--q", type=_q_value, required=True, help="base in (0, 1)")
    p.add_argument("--x", type=_rational)
    p.add_argument("--z", type=_rational)
    p.add_argument("--n", type=int)
    p.add_argument("--alpha", type=_rational)
    p.add_argument("--digits", type=int, default=40, help="significant digits to print")
    _add_ctx_flags(p, default_bits)

    p = sub.add_parser("verify", help="verify catalog records over a q grid")
    p.add_argument("--catalog", type=Path, help="catalog file of template records")
    p.add_argument("--ids", type=_ids, help="comma-separated record ids")
    p.add_argument("--q-grid", type=_q_list, default=None,
                   help="comma-separated q values (default " + ",".join(DEFAULT_GRID) + ")")
    p.add_argument("--format", choices=("tsv", "jsonl"), default="tsv")
    p.add_argument("--output", type=Path, help="write the report here instead of stdout")
    p.add_argument("--jobs", type=int, default=1, help="worker processes")
    _add_ctx_flags(p, default_bits)

    p = sub.add_parser("limit", help="q -> 1 limit studies against classical constants")
    p.add_argument("--ids", type=_ids, required=True, help="comma-separated ids (PI_Q, SIN_Q allowed)")
    p.add_argument("--k-range", type=_k_range, default=(2, 8), help="k range a..b, q_k = 1 - 2^-k")
    p.add_argument("--format", choices=("tsv", "jsonl"), default="tsv")
    p.add_argument("--output", type=Path)
    _add_ctx_flags(p, default_bits)

    p = sub.add_parser("list", help="list catalog records")
    p.add_argument("--catalog", type=Path, help="also list records from this catalog file")
    return parser


def _context(args) -> PrecisionContext:
    kw = {"precision_bits": args.precision}
    if args.tol is not None:
        kw["rel_tol"] = args.tol
    if args.max_terms is not None:
        kw["max_terms"] = args.max_terms
    try:
        return PrecisionContext(**kw)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def _load_catalog(path: Path):
    try:
        text = path.read_text()
    except OSError as exc:
        raise UsageError(f"cannot read catalog {path}: {exc}") from None
    try:
        return parse_catalog(text)
    except (ParseError, InvalidParams) as exc:
        raise UsageError(f"{path}: {exc}") from None


def _emit(text: str, output) -> None:
    if output is None:
        sys.stdout.write(text)
    else:
        output.write_text(text)


# ---------------------------------------------------------------------------
# commands


def cmd_eval(args) -> int:
    ctx = _context(args)
    needed = EVAL_ARGS[args.function]
    missing = [f"--{name}" for name in needed if getattr(args, name) is None]
    if missing:
        raise UsageError(f"{args.function} needs {' '.join(missing)}")
    extra = [f"--{name}" for name in ("x", "z", "n", "alpha")
             if name not in needed and getattr(args, name) is not None]
    if extra:
        raise UsageError(f"{args.function} does not take {' '.join(extra)}")
    q = args.q
    fn = args.function
    with mp.workprec(ctx.working_prec):
        if fn == "q_int":
            res = kernel.q_int(args.x, q, ctx)
        elif fn == "q_factorial":
            res = kernel.q_factorial(args.n, q, ctx)
        elif fn == "poch_finite":
            res = kernel.poch_finite(args.z, q, args.n, ctx)
        elif fn == "poch_infinite":
            res = kernel.poch_infinite(args.z, q, ctx)
        elif fn == "q_gamma":
            res = kernel.q_gamma_result(args.x, q, ctx)
        elif fn == "poch_general":
            res = kernel.poch_general_result(args.x, args.alpha, q, ctx)
        elif fn == "sin_q":
            res = kernel.sin_q_result(args.x, q, ctx)
        else:
            res = kernel.pi_q_result(q, ctx)
        if not isinstance(res, SumResult):
            res = SumResult(res, 0, mpf(0))
        print(mpmath.nstr(res.value, args.digits))
        print(f"tail_bound\t{format_number(res.tail_bound)}")
        print(f"terms\t{res.terms_used}")
    return EXIT_OK


def _select(ids, pool):
    if not ids:
        return list(pool)
    chosen = []
    for rid in ids:
        rec = lookup(rid, tuple(pool)) or lookup(rid)
        if rec is None:
            raise UsageError(f"unknown identity id {rid!r}")
        chosen.append(rec)
    return chosen


def cmd_verify(args) -> int:
    ctx = _context(args)
    pool = _load_catalog(args.catalog) if args.catalog else builtin_catalog()
    records = _select(args.ids, pool)
    if any(r.form is Form.FUNCTION for r in records):
        raise UsageError("PI_Q and SIN_Q are limit subjects, not identities; use `limit`")
    grid = args.q_grid if args.q_grid is not None else DEFAULT_GRID
    if args.jobs < 1:
        raise UsageError("--jobs must be >= 1")
    outcomes = verify_grid(records, grid, ctx, jobs=args.jobs)
    _emit(render_report(outcomes, args.format), args.output)
    counts = {s: 0 for s in Status}
    for o in outcomes:
        counts[o.status] += 1
        if o.status is not Status.PASS:
            print(f"{o.status.value}: {o.identity_id} q={format_number(o.q)} {o.detail}", file=sys.stderr)
    summary = ", ".join(f"{counts[s]} {s.value}" for s in Status)
    print(f"{len(outcomes)} outcomes: {summary}", file=sys.stderr)
    return EXIT_FAIL if counts[Status.FAIL] else EXIT_OK


def cmd_limit(args) -> int:
    ctx = _context(args)
    studies = []
    for rid in args.ids:
        rec = lookup(rid)
        if rec is None:
            raise UsageError(f"unknown identity id {rid!r}")
        if rec.limit_target is None:
            raise UsageError(f"{rid} has no classical limit target")
        studies.append(limit_study(rec, args.k_range, ctx))
    _emit(render_limit_study(studies, args.format), args.output)
    failed = [s for s in studies if not s.passed]
    for s in failed:
        print(f"FAIL: {s.identity_id}: {'; '.join(s.failures)}", file=sys.stderr)
    return EXIT_FAIL if failed else EXIT_OK


def cmd_list(args) -> int:
    records = builtin_catalog() + pseudo_records()
    if args.catalog:
        records += _load_catalog(args.catalog)
    lines = ["id\tform\tdescription\tlimit_target"]
    for r in records:
        lines.append(f"{r.id}\t{r.form.value}\t{r.description}\t{r.limit_target or ''}")
    sys.stdout.write("\n".join(lines) + "\n")
    return EXIT_OK


COMMANDS = {"eval": cmd_eval, "verify": cmd_verify, "limit": cmd_limit, "list": cmd_list}


def main(argv=None) -> int:
    try:
        parser = build_parser(_default_precision())
    except UsageError as exc:
        print(f"qident: {exc}", file=sys.stderr)
        return EXIT_USAGE
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code in (0, None) else EXIT_USAGE
    try:
        return COMMANDS[args.command](args)
    except UsageError as exc:
        print(f"qident {args.command}: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (DomainError, NonConvergence) as exc:
        print(f"qident {args.command}: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_ABORT


if __name__ == "__main__":
    sys.exit(main())
