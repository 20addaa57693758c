"""``csdict`` command line: gen, load-bench, query-bench, quality.

Exit codes: 0 success, 1 runtime failure, 2 usage error.
"""

from __future__ import annotations

import argparse
import os
import sys
import tempfile
from contextlib import contextmanager

from csdict import bench
from csdict.colstore import ColumnKind
from csdict.errors import ContractViolation, ParseError, ResourceError
from csdict.hashcore import HashFunctionId, quality_report
from csdict.tpchgen import SCHEMAS, GenConfig, dump_tbl, generate, load_relation

DATA_ENV = "CSDICT_DATA"


def _hash_fns(choice: str) -> list:
    if choice == "both":
        return [HashFunctionId.JENKINS, HashFunctionId.MMH]
    return [HashFunctionId(choice)]


def _positive(text: str) -> int:
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError("must be >= 1")
    return v


def build_parser() -> argparse.ArgumentParser:
    shared = argparse.ArgumentParser(add_help=False)
    shared.add_argument("--seed", type=int, default=1)
    shared.add_argument("--scale-rows", type=_positive, default=100)
    bench_flags = argparse.ArgumentParser(add_help=False)
    bench_flags.add_argument("--data", default=os.environ.get(DATA_ENV),
                             help=f"directory of .tbl files (default ${DATA_ENV}; "
                                  "generated from --seed/--scale-rows when unset)")
    bench_flags.add_argument("--hash", choices=["mmh", "jenkins", "both"], default="both")

    p = argparse.ArgumentParser(prog="csdict", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    g = sub.add_parser("gen", parents=[shared], help="write the eight .tbl files")
    g.add_argument("--out", required=True)

    for name, helptext in (("load-bench", "per-relation load timing"),
                           ("query-bench", "per-workload query timing")):
        b = sub.add_parser(name, parents=[shared, bench_flags], help=helptext)
        b.add_argument("--reps", type=_positive, default=5)
        b.add_argument("--format", choices=["csv", "md"], default="md")
        b.add_argument("--out", help="report file (default stdout)")
        b.add_argument("--min-time", type=float, default=bench.MIN_REP_SECONDS,
                       help="minimum seconds per repetition")
        if name == "query-bench":
            b.add_argument("--workloads", default=",".join(bench.WORKLOADS))

    q = sub.add_parser("quality", parents=[shared, bench_flags], help="hash quality report")
    q.add_argument("--column", required=True, help="REL.COL, e.g. part.p_type")
    q.add_argument("--buckets", type=_positive, default=1024)
    return p


@contextmanager
def _data_dir(args):
    if args.data:
        yield args.data
        return
    with tempfile.TemporaryDirectory(prefix="csdict-") as tmp:
        dump_tbl(generate(GenConfig(args.seed, args.scale_rows)), tmp)
        yield tmp


@contextmanager
def _sink(path):
    if path is None:
        yield sys.stdout
        return
    try:
        f = open(path, "w", encoding="utf-8", newline="")
    except OSError as exc:
        raise ResourceError(f"cannot write {path}: {exc}") from exc
    with f:
        yield f


def cmd_generate(args) -> int:
    db = generate(GenConfig(args.seed, args.scale_rows))
    dump_tbl(db, args.out)
    for name, n in db.cardinalities().items():
        print(f"{name:10s} {n}")
    return 0


def _emit(report, args) -> int:
    report.seed, report.scale_rows = (None, None) if args.data else (args.seed, args.scale_rows)
    with _sink(args.out) as sink:
        bench.emit_report(report, args.format, sink)
    return 0


def cmd_load_bench(args) -> int:
    with _data_dir(args) as data:
        report = bench.load_bench(data, _hash_fns(args.hash), args.reps, args.min_time)
    return _emit(report, args)


def cmd_query_bench(args) -> int:
    workloads = [w for w in args.workloads.split(",") if w]
    with _data_dir(args) as data:
        report = bench.query_bench(data, _hash_fns(args.hash), args.reps, workloads, args.min_time)
    return _emit(report, args)


def cmd_quality(args) -> int:
    with _data_dir(args) as data:
        for fn in _hash_fns(args.hash):
            rel = load_relation(data, args.rel, fn)
            col = rel.column(args.col)
            if col.kind is ColumnKind.DICT_STRING:
                keys = [s for _, s in col.dict.items()]
            else:
                seen = dict.fromkeys(col.values.tolist())
                keys = [v.to_bytes(8, "little", signed=True) for v in seen]
            report = quality_report(keys, fn, args.buckets)
            print(f"== {args.column} under {fn.value} ==")
            print(report.render())
    return 0


COMMANDS = {
    "gen": cmd_generate,
    "load-bench": cmd_load_bench,
    "query-bench": cmd_query_bench,
    "quality": cmd_quality,
}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command == "query-bench":
        bad = [w for w in args.workloads.split(",") if w and w not in bench.WORKLOADS]
        if bad or not args.workloads.strip(","):
            parser.error(f"unknown workload(s) {', '.join(bad) or '(none)'}; "
                         f"valid: {', '.join(bench.WORKLOADS)}")
    if args.command == "quality":
        rel, _, col = args.column.partition(".")
        if rel not in SCHEMAS or col not in {c for c, _ in SCHEMAS[rel]}:
            parser.error(f"unknown column {args.column!r}; expected REL.COL such as part.p_type")
        if args.buckets & (args.buckets - 1) or args.buckets < 2:
            parser.error("--buckets must be a power of two >= 2")
        args.rel, args.col = rel, col
    try:
        return COMMANDS[args.command](args)
    except (ResourceError, ParseError, ContractViolation, bench.ResultMismatch) as exc:
        print(f"csdict: error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
