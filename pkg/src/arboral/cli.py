"""Command-line front end.

Exit codes: 0 success, 1 a verification or bound check failed, 2 usage or
input error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys

from . import greedy, oracle
from .analysis import ALL_LEMMAS, global_bound, verify_trace
from .generators import PATTERNS, GeneratorSpec, enumerate_permutations, generate
from .geometry import Instance, InstanceError

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def _int_list(text: str) -> list[int]:
    try:
        return [int(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None


def _check_input(path):
    if path is None:
        raise UsageError("--input is required")
    if not os.path.isfile(path) or not os.access(path, os.R_OK):
        raise UsageError(f"cannot read input file {path}")


def _check_output(path):
    if path is None:
        return
    parent = os.path.dirname(os.path.abspath(path))
    if not os.path.isdir(parent):
        raise UsageError(f"output directory does not exist: {parent}")


def _check_search_limits(args):
    if args.max_size is not None and args.max_size < 0:
        raise UsageError("--max-size must be >= 0")
    if args.node_budget < 1:
        raise UsageError("--node-budget must be >= 1")


def _write(path, text):
    if path is None or path == "-":
        sys.stdout.write(text)
        return
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)


def _read_instance(path) -> Instance:
    try:
        return Instance.read(path)
    except InstanceError as exc:
        raise UsageError(f"{path}: {exc}") from None


def cmd_gen(args) -> int:
    _check_output(args.out)
    try:
        spec = GeneratorSpec(args.pattern, args.n, args.seed)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    _write(args.out, generate(spec).to_text())
    return EXIT_OK


def cmd_run(args) -> int:
    _check_input(args.input)
    _check_output(args.trace_out)
    _check_output(args.stats_out)
    trace = greedy.run(_read_instance(args.input))
    if args.trace_out:
        _write(args.trace_out, trace.to_json())
    if args.stats_out:
        _write(args.stats_out, trace.stats_csv())
    print(trace.added_count)
    bad = trace.parent_violations()
    if bad:
        print(f"parent check failed for {len(bad)} added points, first {tuple(bad[0])}",
              file=sys.stderr)
        return EXIT_FAIL
    return EXIT_OK


def cmd_oracle(args) -> int:
    _check_input(args.input)
    _check_output(args.out)
    _check_search_limits(args)
    inst = _read_instance(args.input)
    result = oracle.min_arb(inst, args.max_size, args.node_budget)
    payload = result.to_dict()
    payload["instance_hash"] = inst.digest()
    _write(args.out, json.dumps(payload) + "\n")
    if args.out:
        print(result.size)
    return EXIT_OK


def cmd_verify(args) -> int:
    _check_input(args.input)
    _check_output(args.report)
    lemmas = None
    if args.lemmas and args.lemmas != "all":
        lemmas = [v.strip() for v in args.lemmas.split(",") if v.strip()]
        unknown = sorted(set(lemmas) - set(ALL_LEMMAS))
        if unknown:
            raise UsageError(f"unknown lemma(s) {', '.join(unknown)}; choose from {', '.join(ALL_LEMMAS)}")
    trace = greedy.run(_read_instance(args.input))
    report = verify_trace(trace, args.partitions, lemmas)
    if args.report:
        _write(args.report, report.to_json())
    for part, check in report.soft_failures():
        print(f"soft check {check.lemma} failed on {part.as_list()}: {check.witness}", file=sys.stderr)
    failures = report.failures()
    for part, check in failures:
        where = "global" if part is None else part.as_list()
        print(f"FAIL {check.lemma} on {where}: measured {check.measured} > bound {check.bound}"
              f" ({check.witness})", file=sys.stderr)
    checked = sum(len(r.checks) for r in report.reports) + (report.global_check is not None)
    print(f"{'ok' if not failures else 'FAILED'}: {checked} checks over "
          f"{len(report.reports)} partitions, {len(failures)} hard failures")
    return EXIT_OK if not failures else EXIT_FAIL


def _scale_row(writer, n, seed, inst, trace):
    bound = global_bound(n)
    ratio = trace.added_count / (n * math.log2(n)) if n > 1 else 0.0
    writer.writerow([n, seed, inst.digest(), trace.added_count, bound, f"{ratio:.6f}"])
    return trace.added_count <= bound


def cmd_scale(args) -> int:
    for path in args.input or []:
        _check_input(path)
    _check_output(args.out)
    sizes = [n for group in (args.n or []) for n in group]
    if any(n < 1 for n in sizes):
        raise UsageError("every n must be >= 1")
    if not sizes and not args.input:
        raise UsageError("give --n and/or --input")
    if sizes and args.seeds < 1:
        raise UsageError("--seeds must be >= 1")
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["n", "seed", "instance_hash", "added", "bound", "ratio"])
    ok = True
    for path in args.input or []:
        inst = _read_instance(path)
        ok &= _scale_row(writer, inst.n, "", inst, greedy.run(inst))
    for n in sizes:
        totals = []
        for seed in range(args.seed, args.seed + args.seeds):
            inst = generate(GeneratorSpec("random", n, seed))
            trace = greedy.run(inst)
            totals.append(trace.added_count)
            ok &= _scale_row(writer, n, seed, inst, trace)
        print(f"n={n}: mean added {sum(totals) / len(totals):.1f} over {len(totals)} seeds",
              file=sys.stderr)
    _write(args.out, buf.getvalue())
    if not ok:
        print("bound 7*n*ceil(log2 n) violated", file=sys.stderr)
    return EXIT_OK if ok else EXIT_FAIL


def cmd_ratio(args) -> int:
    _check_output(args.out)
    if args.n < 1:
        raise UsageError("n must be >= 1")
    _check_search_limits(args)
    if args.mode == "sample" and args.samples < 1:
        raise UsageError("--samples must be >= 1")
    if args.mode == "exhaustive":
        if args.n > 6 and not args.allow_large:
            raise UsageError("exhaustive mode is limited to n <= 6 (use --allow-large)")
        instances = list(enumerate_permutations(args.n))
    else:
        instances = [generate(GeneratorSpec("random", args.n, args.seed + i))
                     for i in range(args.samples)]
    report = oracle.ratio_report(instances, args.max_size, args.node_budget)
    _write(args.out, report.to_csv())
    flagged = len(report.rows) - len(report.exact_rows)
    mx, mean = report.max_ratio, report.mean_ratio
    print(f"instances={len(report.rows)} exact={len(report.exact_rows)} flagged={flagged} "
          f"max_ratio={'n/a' if mx is None else f'{mx:.6f}'} "
          f"mean_ratio={'n/a' if mean is None else f'{mean:.6f}'}",
          file=sys.stderr if args.out in (None, "-") else sys.stdout)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="arboral", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen", help="write an instance file")
    p.add_argument("--pattern", choices=PATTERNS, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", help="output path (default stdout)")
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("run", help="run GreedyArb on an instance")
    p.add_argument("--input", required=True)
    p.add_argument("--trace-out")
    p.add_argument("--stats-out")
    p.set_defaults(func=cmd_run)

    p = sub.add_parser("oracle", help="exact minimum augmentation (small n)")
    p.add_argument("--input", required=True)
    p.add_argument("--max-size", type=int, default=None)
    p.add_argument("--node-budget", type=int, default=oracle.DEFAULT_NODE_BUDGET)
    p.add_argument("--out")
    p.set_defaults(func=cmd_oracle)

    p = sub.add_parser("verify", help="check the analysis lemmas on the GreedyArb trace")
    p.add_argument("--input", required=True)
    p.add_argument("--lemmas", default="all",
                   help=f"comma-separated subset of: {', '.join(ALL_LEMMAS)}")
    p.add_argument("--partitions", choices=("dyadic", "all_halves"), default="dyadic")
    p.add_argument("--report")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("scale", help="added-point growth on random instances")
    p.add_argument("--n", type=_int_list, action="append", help="sizes, comma-separated; repeatable")
    p.add_argument("--seeds", type=int, default=10, help="seeds per size")
    p.add_argument("--seed", type=int, default=0, help="first seed")
    p.add_argument("--input", action="append", help="fixed instance file; repeatable")
    p.add_argument("--out")
    p.set_defaults(func=cmd_scale)

    p = sub.add_parser("ratio", help="greedy versus exact optimum")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--mode", choices=("exhaustive", "sample"), default="exhaustive")
    p.add_argument("--samples", type=int, default=20)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--max-size", type=int, default=None)
    p.add_argument("--node-budget", type=int, default=oracle.DEFAULT_NODE_BUDGET)
    p.add_argument("--allow-large", action="store_true")
    p.add_argument("--out")
    p.set_defaults(func=cmd_ratio)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"arboral {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
