"""Benchmark protocol: load timing per relation, query timing per workload.

Each cell runs one discarded warmup, then ``reps`` timed repetitions,
interleaved with the other hash function's repetitions of the same workload. A
repetition calls the workload ``loops`` times back to back, with ``loops``
sized from the warmup so one repetition lasts at least ``min_time`` seconds,
and records milliseconds per call. Cells report the median and the
coefficient of variation of those per-call times. GC is paused while timing.
"""

from __future__ import annotations

import csv
import gc
import hashlib
import io
import math
import os
import platform
import statistics
import time
from dataclasses import dataclass, field
from functools import partial

from csdict import _kernels
from csdict.colstore import ColumnKind, dump_tbl_text, load_tbl
from csdict.costmodel import SelectivityStats, selectivity
from csdict.errors import ContractViolation, ResourceError
from csdict.hashcore import HashFunctionId
from csdict.scan import hash_join_eq, hash_scan_eq, run_q2_like
from csdict.tpchgen import RELATIONS, load_dbgen_dir, new_relation, tbl_path

MIN_REP_SECONDS = 0.1
MAX_LOOPS = 100_000
WORKLOADS = ("q2like", "point_k", "join_ps")
TABLE_LABELS = {
    "region": "Region", "nation": "Nation", "supplier": "Supplier", "customer": "Customer",
    "part": "Part", "partsupp": "PartSupp", "orders": "Orders", "lineitem": "LineItem",
}
FN_LABELS = {HashFunctionId.JENKINS: "Jenkins' (ms)", HashFunctionId.MMH: "MMH (ms)"}
CSV_FIELDS = ("workload", "hash_fn", "reps", "median_ms", "cv", "delta_pct")
DELTA_ROW = "delta"


class ResultMismatch(RuntimeError):
    """Workload results differ between hash functions."""


@dataclass
class BenchCell:
    workload: str
    hash_fn: HashFunctionId
    repetitions: int
    times_ms: list
    loops: int = 1
    digest: str = ""
    result_rows: int | None = None

    @property
    def median_ms(self) -> float:
        return statistics.median(self.times_ms)

    @property
    def cv(self) -> float:
        mean = statistics.fmean(self.times_ms)
        if len(self.times_ms) < 2 or mean == 0:
            return 0.0
        return statistics.pstdev(self.times_ms) / mean


@dataclass
class BenchReport:
    kind: str  # "load" or "query"
    cells: list = field(default_factory=list)
    environment: str = ""
    seed: int | None = None
    scale_rows: int | None = None

    def workloads(self) -> list:
        seen = []
        for c in self.cells:
            if c.workload not in seen:
                seen.append(c.workload)
        return seen

    def cell(self, workload: str, fn: HashFunctionId) -> BenchCell | None:
        for c in self.cells:
            if c.workload == workload and c.hash_fn is fn:
                return c
        return None

    def functions(self) -> list:
        present = {c.hash_fn for c in self.cells}
        return [fn for fn in (HashFunctionId.JENKINS, HashFunctionId.MMH) if fn in present]

    def delta_pct(self, workload: str) -> float | None:
        j = self.cell(workload, HashFunctionId.JENKINS)
        m = self.cell(workload, HashFunctionId.MMH)
        if j is None or m is None:
            return None
        return delta_pct(j.median_ms, m.median_ms)

    def check_results(self) -> None:
        """Raise ``ResultMismatch`` unless every workload agrees across functions."""
        for w in self.workloads():
            digests = {c.hash_fn.value: c.digest for c in self.cells if c.workload == w}
            if len(set(digests.values())) > 1:
                raise ResultMismatch(f"{w}: results differ between hash functions {digests}")


def delta_pct(jenkins_ms: float, mmh_ms: float) -> float:
    """Relative saving of MMH over Jenkins, in percent of the Jenkins time."""
    return 100.0 * (jenkins_ms - mmh_ms) / jenkins_ms


def environment() -> str:
    return (f"{platform.platform()}; {platform.machine()}; cpus={os.cpu_count()}; "
            f"python {platform.python_version()}; kernels={_kernels.BACKEND}")


def digest(obj) -> str:
    return hashlib.sha256(repr(obj).encode("utf-8")).hexdigest()


def measure_interleaved(fns: dict, reps: int, min_time: float = MIN_REP_SECONDS) -> dict:
    """Time several variants of one workload with their repetitions interleaved.

    ``fns`` maps a key to a zero-argument callable. Every variant gets its
    warmup first; then repetition ``i`` of each variant runs before
    repetition ``i + 1`` of any, so slow drift on the host hits all variants
    alike. Returns ``{key: (times_ms, loops, warmup result)}``.
    """
    if reps < 1:
        raise ContractViolation("reps must be at least 1")
    results, loops, times = {}, {}, {}
    for key, fn in fns.items():
        gc.collect()
        t0 = time.perf_counter()
        results[key] = fn()
        warm = time.perf_counter() - t0
        loops[key] = max(1, min(MAX_LOOPS, math.ceil(min_time / max(warm, 1e-9))))
        times[key] = []
    enabled = gc.isenabled()
    try:
        for _ in range(reps):
            for key, fn in fns.items():
                n = loops[key]
                gc.collect()
                gc.disable()
                t0 = time.perf_counter()
                for _ in range(n):
                    fn()
                elapsed = time.perf_counter() - t0
                gc.enable()
                times[key].append(1000.0 * elapsed / n)
    finally:
        if enabled:
            gc.enable()
    return {key: (times[key], loops[key], results[key]) for key in fns}


def measure(fn, reps: int, min_time: float = MIN_REP_SECONDS):
    """Time ``fn`` alone; returns ``(times_ms, loops, warmup result)``."""
    return measure_interleaved({0: fn}, reps, min_time)[0]


def load_bench(data_dir, fns, reps: int = 5, min_time: float = MIN_REP_SECONDS) -> BenchReport:
    """Time a full ``load_tbl`` build of each relation into fresh heaps."""
    paths = {name: tbl_path(data_dir, name) for name in RELATIONS}
    report = BenchReport("load", environment=environment())
    for name in RELATIONS:
        def build(fn, name=name):
            rel = new_relation(name, fn)
            load_tbl(paths[name], rel)
            return rel
        timed = measure_interleaved({fn: partial(build, fn) for fn in fns}, reps, min_time)
        for fn in fns:
            times, loops, rel = timed[fn]
            report.cells.append(BenchCell(name, fn, reps, times, loops,
                                          digest(dump_tbl_text(rel)), rel.row_count))
    report.check_results()
    return report


def point_tiers(part) -> dict:
    """Pick part string columns at rare, medium and common selectivity."""
    ranked = []
    for col in part.columns:
        if col.kind is ColumnKind.DICT_STRING:
            sel = selectivity(SelectivityStats(part.row_count, part.distinct_count(col.name)))
            ranked.append((sel, col.name))
    ranked.sort()
    return {"rare": ranked[0][1], "medium": ranked[len(ranked) // 2][1], "common": ranked[-1][1]}


def _point_probes(part, tiers: dict) -> list:
    probes = []
    for tier, column in tiers.items():
        literals = sorted(s.decode("utf-8") for _, s in part.column(column).dict.items())
        literals += [f"absent {tier} {i}" for i in range(max(1, len(literals) // 4))]
        probes.append((column, literals))
    return probes


def _workload(name: str, db):
    if name == "q2like":
        def run():
            return run_q2_like(db)
    elif name == "point_k":
        part = db["part"]
        probes = _point_probes(part, point_tiers(part))

        def run():
            return [sum(len(hash_scan_eq(part, column, lit)) for lit in literals)
                    for column, literals in probes]
    elif name == "join_ps":
        def run():
            return hash_join_eq(db["partsupp"], "ps_suppkey", db["supplier"], "s_suppkey")
    else:
        raise ContractViolation(f"unknown workload {name!r}; valid: {', '.join(WORKLOADS)}")
    return run


def query_bench(data_dir, fns, reps: int = 5, workloads=WORKLOADS,
                min_time: float = MIN_REP_SECONDS) -> BenchReport:
    for w in workloads:
        if w not in WORKLOADS:
            raise ContractViolation(f"unknown workload {w!r}; valid: {', '.join(WORKLOADS)}")
    report = BenchReport("query", environment=environment())
    dbs = {fn: load_dbgen_dir(data_dir, fn) for fn in fns}
    for w in workloads:
        timed = measure_interleaved({fn: _workload(w, dbs[fn]) for fn in fns}, reps, min_time)
        for fn in fns:
            times, loops, result = timed[fn]
            rows = len(result) if w != "point_k" else sum(result)
            report.cells.append(BenchCell(w, fn, reps, times, loops, digest(result), rows))
    report.check_results()
    return report


def _fmt(v: float) -> str:
    return f"{v:.3f}"


def emit_report(report: BenchReport, fmt: str, sink) -> int:
    """Write ``report`` as ``csv`` or ``md`` to the text stream ``sink``."""
    if not report.cells:
        raise ContractViolation("cannot emit an empty report")
    buf = io.StringIO()
    both = len(report.functions()) == 2
    if fmt == "csv":
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(CSV_FIELDS)
        for wl in report.workloads():
            for fn in report.functions():
                c = report.cell(wl, fn)
                w.writerow([wl, fn.value, c.repetitions, _fmt(c.median_ms), f"{c.cv:.4f}", ""])
            if both:
                reps = report.cell(wl, HashFunctionId.MMH).repetitions
                w.writerow([wl, DELTA_ROW, reps, "", "", f"{report.delta_pct(wl):.2f}"])
    elif fmt == "md":
        first = "Relation" if report.kind == "load" else "Workload"
        head = [first] + [FN_LABELS[fn] for fn in report.functions()]
        if both and report.kind == "query":
            head.append("Delta (%)")
        buf.write("| " + " | ".join(head) + " |\n")
        buf.write("|" + "|".join(["---"] * len(head)) + "|\n")
        for wl in report.workloads():
            label = TABLE_LABELS.get(wl, wl)
            cells = [label] + [_fmt(report.cell(wl, fn).median_ms) for fn in report.functions()]
            if both and report.kind == "query":
                cells.append(f"{report.delta_pct(wl):+.1f}")
            buf.write("| " + " | ".join(cells) + " |\n")
        buf.write("\n")
        if report.kind == "query":
            for wl in report.workloads():
                c = report.cells[[x.workload for x in report.cells].index(wl)]
                buf.write(f"{wl} result rows: {c.result_rows}\n")
        elif both:
            deltas = ", ".join(f"{TABLE_LABELS[w]} {report.delta_pct(w):+.1f}%"
                               for w in report.workloads())
            buf.write(f"MMH saving vs Jenkins: {deltas}\n")
        worst = max(report.cells, key=lambda c: c.cv)
        buf.write(f"max cv {worst.cv:.4f} ({worst.workload}/{worst.hash_fn.value}); "
                  f"reps {worst.repetitions}\n")
        if report.seed is not None:
            buf.write(f"seed {report.seed}, scale_rows {report.scale_rows}\n")
        buf.write(f"host: {report.environment}\n")
    else:
        raise ContractViolation(f"unknown format {fmt!r}")
    text = buf.getvalue()
    try:
        sink.write(text)
    except OSError as exc:
        raise ResourceError(f"cannot write report: {exc}") from exc
    return len(text.encode("utf-8"))
