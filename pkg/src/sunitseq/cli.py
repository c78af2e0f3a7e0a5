"""Command-line entry point.

Exit codes: 0 success (including "no tail found"), 2 usage or parse error,
3 search budget exceeded.
"""

from __future__ import annotations

import argparse
import json
import sys

from .sinteger import PrimeSet, enumerate_s_integers, format_sunit
from .tseq import (
    DEFAULT_GEOM_HORIZON,
    DEFAULT_NODE_BUDGET,
    EVIDENCE_CAVEAT,
    CriterionQuery,
    Explicit,
    GeometricCombo,
    NodeBudgetExceeded,
    criterion_sweep,
    find_violations,
    generate,
    parse_sequence_spec,
    tail_embedding,
    universal_terms,
)
from .unit_equation import (
    DEFAULT_SEARCH_CEILING,
    DOMAINS,
    S_UNITS,
    SearchBudgetExceeded,
    UnitEquation,
    decompose,
    parse_solution,
    solve_bounded,
    witness_sets,
)

EXIT_OK, EXIT_USAGE, EXIT_BUDGET = 0, 2, 3

# options whose values may start with "-"
_SIGNED_OPTS = ("--c", "--M")


class UsageError(Exception):
    pass


def dump(record: dict) -> str:
    return json.dumps(record, separators=(",", ":"))


class Out:
    def __init__(self, fmt: str, stream=None):
        self.structured = fmt == "json-lines"
        self.stream = stream or sys.stdout

    def record(self, rec: dict, plain: str | None):
        if self.structured:
            print(dump(rec), file=self.stream)
        elif plain is not None:
            print(plain, file=self.stream)

    def plain(self, text: str):
        if not self.structured:
            print(text, file=self.stream)


def _primes(text: str) -> PrimeSet:
    try:
        return PrimeSet.parse(text)
    except ValueError as exc:
        raise UsageError(f"invalid prime set: {exc}") from None


def _equation(text: str) -> UnitEquation:
    try:
        return UnitEquation.parse(text)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def _ints(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(t) for t in text.split(","))
    except ValueError:
        raise UsageError(f"expected comma-separated integers, got {text!r}") from None


def cmd_enumerate(args, out: Out) -> int:
    s = _primes(args.primes)
    if args.count is None and args.bound is None:
        raise UsageError("give --count or --bound")
    for i, x in enumerate(enumerate_s_integers(s, count=args.count, bound=args.bound), 1):
        out.record({"index": i, "value": x.value, "unit": format_sunit(x.unit)}, str(x.value))
    return EXIT_OK


def _solution_record(eq, sol) -> dict:
    return {
        "equation": str(eq),
        "solution": list(sol.texts()),
        "values": [str(v) for v in sol.values],
        "degenerate": sol.degenerate,
    }


def cmd_solve(args, out: Out) -> int:
    eq = _equation(args.equation)
    sols = solve_bounded(eq, args.exp_bound, args.domain, args.budget)
    for sol in sols:
        if args.nondegenerate_only and sol.degenerate:
            continue
        flag = "degenerate" if sol.degenerate else "non-degenerate"
        out.record(_solution_record(eq, sol), f"{sol}\t{flag}")
    return EXIT_OK


def cmd_witness(args, out: Out) -> int:
    eq = _equation(args.equation)
    ws = witness_sets(eq, args.exp_bound, args.domain, args.budget)
    for i, v in enumerate(ws.sets, 1):
        texts = sorted(format_sunit(x) for x in v)
        out.record(
            {"index": i, "height_bound": ws.height_bound, "domain": ws.domain, "set": texts},
            f"V{i} = {{{', '.join(texts)}}}",
        )
    return EXIT_OK


def cmd_decompose(args, out: Out) -> int:
    eq = _equation(args.equation)
    try:
        sol = parse_solution(args.solution, eq.primes)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    dec = decompose(eq, sol)
    out.record(
        {
            "zero_set": [i + 1 for i in dec.zero_set],
            "active_set": [i + 1 for i in dec.active_set],
            "residual": list(dec.residual.texts()),
        },
        str(dec),
    )
    return EXIT_OK


def _sequence(args, n: int) -> tuple[object, list[int]]:
    try:
        spec = parse_sequence_spec(args.seq)
        return spec, generate(spec, n)
    except (ValueError, OSError) as exc:
        raise UsageError(str(exc)) from None


def cmd_tseq_check(args, out: Out) -> int:
    try:
        spec = parse_sequence_spec(args.seq)
    except (ValueError, OSError) as exc:
        raise UsageError(str(exc)) from None
    horizon = args.horizon
    if horizon is None:
        if isinstance(spec, GeometricCombo):
            horizon = DEFAULT_GEOM_HORIZON
        elif isinstance(spec, Explicit):
            horizon = len(spec.terms)
        else:
            raise UsageError("--horizon is required for this sequence")
    try:
        terms = generate(spec, horizon)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    report = criterion_sweep(terms, args.kmax, args.cbound, args.mbound, horizon, args.budget)
    out.record(
        {"kind": "sweep", "sequence": str(spec), "horizon": horizon, "cells": len(report.cells),
         "all_finite": report.all_finite, "caveat": report.caveat},
        None,
    )
    counts = {}
    for cell in report.cells:
        counts[cell.status] = counts.get(cell.status, 0) + 1
        out.record(
            {"kind": "cell", "c": list(cell.c), "M": cell.M, "status": cell.status,
             "tail": cell.tail, "hits": cell.hits},
            None,
        )
    out.plain(f"sequence: {spec}   horizon: {horizon}   cells: {len(report.cells)}")
    for status in ("finite-tail", "no-tail-found", "budget-exceeded"):
        out.plain(f"  {status:16s} {counts.get(status, 0)}")
    absent = report.absent()
    if absent:
        out.plain("cells without a tail:")
        out.plain(f"  {'c':>16s}  {'M':>5s}  hits")
        for cell in absent:
            out.plain(f"  {','.join(map(str, cell.c)):>16s}  {cell.M:>5d}  {cell.hits}")
    else:
        worst = max((cell.tail for cell in report.cells if cell.tail is not None), default=0)
        out.plain(f"largest observed tail index: {worst}")
    out.plain(report.caveat)
    return EXIT_BUDGET if counts.get("budget-exceeded") else EXIT_OK


def cmd_tseq_violations(args, out: Out) -> int:
    spec, terms = _sequence(args, args.horizon)
    try:
        q = CriterionQuery(_ints(args.c), args.M, args.horizon, args.tail)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    report = find_violations(terms, q, args.budget)
    if not report.exhausted:
        status = "budget-exceeded"
    else:
        status = "violations-found" if report.hits else "no-violations"
    out.record(
        {"sequence": str(spec), "c": list(q.c), "M": q.M, "tail": q.tail, "horizon": q.horizon,
         "exhausted": report.exhausted, "status": status, "hits": [list(h) for h in report.hits],
         "caveat": EVIDENCE_CAVEAT},
        None,
    )
    out.plain(f"{status}: {len(report.hits)} hit(s) for c={q.c} M={q.M} in ({q.tail}, {q.horizon}]")
    for h in report.hits:
        out.plain("  " + " ".join(f"s_{i}={terms[i - 1]}" for i in h))
    return EXIT_OK if report.exhausted else EXIT_BUDGET


def cmd_tseq_universal(args, out: Out) -> int:
    s = _primes(args.primes)
    terms = universal_terms(s, args.count)
    for i, v in enumerate(terms, 1):
        out.record({"index": i, "value": v}, None)
    out.plain(" ".join(map(str, terms)))
    return EXIT_OK


def cmd_tseq_embed(args, out: Out) -> int:
    s = _primes(args.primes)
    spec, d = _sequence(args, args.count)
    try:
        k = tail_embedding(d, s, args.tail)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    status = "embedded" if k is not None else "no-tail-found"
    out.record({"sequence": str(spec), "primes": str(s), "m": args.tail, "count": args.count,
                "k": k, "status": status}, None)
    out.plain(f"k = {k}" if k is not None else "status: no-tail-found")
    return EXIT_OK


def _positive(text: str) -> int:
    v = int(text)
    if v <= 0:
        raise argparse.ArgumentTypeError(f"must be positive, got {v}")
    return v


def _nonneg(text: str) -> int:
    v = int(text)
    if v < 0:
        raise argparse.ArgumentTypeError(f"must be nonnegative, got {v}")
    return v


def build_parser() -> argparse.ArgumentParser:
    fmt = argparse.ArgumentParser(add_help=False)
    fmt.add_argument("--format", choices=("plain", "json-lines"), default="plain")

    p = argparse.ArgumentParser(prog="sunitseq", description="S-integers, S-unit equations and T-sequence evidence.")
    sub = p.add_subparsers(dest="command", required=True)

    e = sub.add_parser("enumerate", parents=[fmt], help="positive S-integers in increasing order")
    e.add_argument("--primes", required=True)
    e.add_argument("--count", type=_positive)
    e.add_argument("--bound", type=_positive)
    e.set_defaults(func=cmd_enumerate)

    def eq_opts(sp):
        sp.add_argument("equation", help='e.g. "1,1=1 over 2,3"')
        sp.add_argument("--exp-bound", type=_nonneg, required=True)
        sp.add_argument("--domain", choices=DOMAINS, default=S_UNITS)
        sp.add_argument("--budget", type=_positive, default=DEFAULT_SEARCH_CEILING,
                        help="ceiling on (2E+1)^(|S|k)")

    s = sub.add_parser("solve", parents=[fmt], help="bounded-height solutions with degeneracy flags")
    eq_opts(s)
    s.add_argument("--nondegenerate-only", action="store_true")
    s.set_defaults(func=cmd_solve)

    w = sub.add_parser("witness", parents=[fmt], help="witness sets V_1..V_k at a height bound")
    eq_opts(w)
    w.set_defaults(func=cmd_witness)

    d = sub.add_parser("decompose", parents=[fmt], help="split a solution into zero-sum and non-degenerate parts")
    d.add_argument("equation")
    d.add_argument("solution", help='e.g. "4,-4,1"')
    d.set_defaults(func=cmd_decompose)

    t = sub.add_parser("tseq", help="T-sequence criterion tools")
    tsub = t.add_subparsers(dest="tseq_command", required=True)

    c = tsub.add_parser("check", parents=[fmt], help="bounded criterion sweep")
    c.add_argument("--seq", required=True)
    c.add_argument("--kmax", type=_positive, default=2)
    c.add_argument("--cbound", type=_positive, default=2)
    c.add_argument("--mbound", type=_positive, default=20)
    c.add_argument("--horizon", type=_positive)
    c.add_argument("--budget", type=_positive, default=DEFAULT_NODE_BUDGET)
    c.set_defaults(func=cmd_tseq_check)

    v = tsub.add_parser("violations", parents=[fmt], help="index tuples hitting one (c, M)")
    v.add_argument("--seq", required=True)
    v.add_argument("--c", required=True)
    v.add_argument("--M", type=int, required=True)
    v.add_argument("--horizon", type=_positive, required=True)
    v.add_argument("--tail", type=_nonneg, default=0)
    v.add_argument("--budget", type=_positive, default=DEFAULT_NODE_BUDGET)
    v.set_defaults(func=cmd_tseq_violations)

    u = tsub.add_parser("universal", parents=[fmt], help="the universal S-integer sequence")
    u.add_argument("--primes", required=True)
    u.add_argument("--count", type=_positive, required=True)
    u.set_defaults(func=cmd_tseq_universal)

    m = tsub.add_parser("embed", parents=[fmt], help="where a sequence of S-integers enters a universal tail")
    m.add_argument("--primes", required=True)
    m.add_argument("--seq", required=True)
    m.add_argument("--count", type=_positive, required=True)
    m.add_argument("--tail", type=_positive, required=True, help="universal tail index m")
    m.set_defaults(func=cmd_tseq_embed)
    return p


def _join_signed(argv: list[str]) -> list[str]:
    out, i = [], 0
    while i < len(argv):
        if argv[i] in _SIGNED_OPTS and i + 1 < len(argv):
            out.append(f"{argv[i]}={argv[i + 1]}")
            i += 2
        else:
            out.append(argv[i])
            i += 1
    return out


def main(argv: list[str] | None = None) -> int:
    argv = _join_signed(list(sys.argv[1:] if argv is None else argv))
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE
    out = Out(getattr(args, "format", "plain"))
    try:
        return args.func(args, out)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (SearchBudgetExceeded, NodeBudgetExceeded) as exc:
        print(f"budget exceeded: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
