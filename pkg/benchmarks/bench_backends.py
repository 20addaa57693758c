"""Compare the compiled kernels against the pure-Python fallback.

    python benchmarks/bench_backends.py [--reps 5] [--scale-rows 100]

Kernel calls are timed in-process against both modules directly. Heap
builds go through ``StringHeap``, which binds its backend at import, so
that row runs once per backend in a child interpreter with ``CSDICT_PURE``
toggled.
"""

import argparse
import json
import os
import subprocess
import sys

import numpy as np

from csdict import _pykernels
from csdict.bench import measure_interleaved
from csdict.tpchgen import GenConfig, generate_rows

try:
    from csdict import _ckernels
except ImportError:
    sys.exit("compiled kernels not built; run `pip install -e . --no-build-isolation` first")

HEAP_CHILD = """
import json, sys
from csdict import _kernels
from csdict.bench import measure
from csdict.hashcore import HashFunctionId
from csdict.strheap import StringHeap
strings, reps = json.loads(sys.stdin.read())
def build():
    h = StringHeap(hash_fn=HashFunctionId.MMH)
    for s in strings:
        h.insert(s)
    return h.entry_count
times, _, _ = measure(build, reps)
print(json.dumps([_kernels.BACKEND, sorted(times)[len(times) // 2]]))
"""


def corpus(scale_rows):
    rows = generate_rows(GenConfig(seed=1, scale_rows=scale_rows))
    strings = [v for rel in rows.values() for row in rel for v in row if isinstance(v, str)]
    ps = rows["partsupp"]
    sup = rows["supplier"]
    join = (np.array([r[0] for r in sup], dtype=np.int64), np.arange(len(sup), dtype=np.int64),
            np.array([r[1] for r in ps], dtype=np.int64), np.arange(len(ps), dtype=np.int64))
    return strings, join


def _plain(result):
    if isinstance(result, tuple):
        return [list(part) for part in result]
    return list(result)


def heap_build(strings, reps, pure):
    env = dict(os.environ)
    env.pop("CSDICT_PURE", None)
    if pure:
        env["CSDICT_PURE"] = "1"
    out = subprocess.run([sys.executable, "-c", HEAP_CHILD], input=json.dumps([strings, reps]),
                         capture_output=True, text=True, env=env, check=True)
    return json.loads(out.stdout)


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--reps", type=int, default=5)
    ap.add_argument("--scale-rows", type=int, default=100)
    args = ap.parse_args(argv)

    strings, join = corpus(args.scale_rows)
    keys = [s.encode() for s in strings]
    cases = {
        "mmh hash_many": lambda m: (lambda: m.hash_many(keys, 0)),
        "jenkins hash_many": lambda m: (lambda: m.hash_many(keys, 1)),
        "join_int64 ps x supplier": lambda m: (lambda: m.join_int64(*join, 0)),
    }
    print(f"{len(keys)} strings, {len(join[2])} probe rows, {args.reps} reps\n")
    print(f"{'case':28s} {'cython ms':>10s} {'python ms':>10s} {'speedup':>8s}")
    for name, make in cases.items():
        r = measure_interleaved({"c": make(_ckernels), "py": make(_pykernels)}, args.reps)
        assert _plain(r["c"][2]) == _plain(r["py"][2]), name
        c, p = (float(np.median(r[k][0])) for k in ("c", "py"))
        print(f"{name:28s} {c:10.3f} {p:10.3f} {p / c:7.1f}x")
    (cb, c), (pb, p) = heap_build(strings, args.reps, False), heap_build(strings, args.reps, True)
    assert (cb, pb) == ("cython", "python")
    print(f"{'StringHeap build':28s} {c:10.3f} {p:10.3f} {p / c:7.1f}x")


if __name__ == "__main__":
    main()
