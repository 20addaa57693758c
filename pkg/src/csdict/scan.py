"""Hash-scan operators and the fixed Q2-like plan.

Tid lists are sorted ``int64`` numpy arrays. String predicates consult the
column dictionary once; the code vector is only read when the literal is
actually stored.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from csdict import _kernels
from csdict.colstore import ColumnKind, Relation
from csdict.costmodel import SeekParams, seeks_with_remainder
from csdict.errors import ContractViolation
from csdict.hashcore import HashFunctionId

Q2_SIZE = 29
Q2_TYPE_SUFFIX = " BURNISHED TIN"
Q2_REGION = "MIDDLE EAST"
Q2_COLUMNS = ("s_acctbal", "s_name", "n_name", "p_partkey", "p_mfgr", "s_address",
              "s_phone", "s_comment")

_EMPTY = np.empty(0, dtype=np.int64)


def _all_tids(rel: Relation) -> np.ndarray:
    return np.arange(rel.row_count, dtype=np.int64)


def hash_scan_eq(rel: Relation, column: str, literal) -> np.ndarray:
    """Tids whose ``column`` equals ``literal``."""
    col = rel.column(column)
    if col.kind is ColumnKind.DICT_STRING:
        if not isinstance(literal, str):
            raise ContractViolation(f"{column} is a string column, literal is {type(literal).__name__}")
        ref = col.dict.lookup(literal)
        if ref is None:
            return _EMPTY.copy()
    else:
        if isinstance(literal, bool) or not isinstance(literal, (int, np.integer)):
            raise ContractViolation(f"{column} holds integers, literal is {type(literal).__name__}")
        ref = int(literal)
    values = col.values
    col.reads += len(values)
    return np.flatnonzero(values == ref).astype(np.int64)


def scan_like_suffix(rel: Relation, column: str, suffix: str) -> np.ndarray:
    """Tids whose string ends with ``suffix`` (``LIKE '%suffix'``).

    The suffix test runs once per distinct dictionary entry.
    """
    col = rel.column(column)
    if col.kind is not ColumnKind.DICT_STRING:
        raise ContractViolation(f"{column} is not a string column")
    tail = suffix.encode("utf-8")
    refs = [r for r, s in col.dict.items() if s.endswith(tail)]
    values = col.values
    col.reads += len(values)
    if not refs:
        return _EMPTY.copy()
    return np.flatnonzero(np.isin(values, refs)).astype(np.int64)


@dataclass
class Fetched:
    rows: list
    seeks: int


def fetch_remainder(rel: Relation, tids, columns, lid: int = 8, blocksize: int = 1) -> Fetched:
    """Materialise ``columns`` for ``tids`` in tid order, with the modeled seek cost.

    The cost uses the whole relation as the scanned segment, the summed width
    of the fetched columns as AK and ``len(tids)`` as MROW.
    """
    cols = [rel.column(c) for c in columns]
    tids = np.asarray(tids, dtype=np.int64)
    if len(tids) and (tids.min() < 0 or tids.max() >= rel.row_count):
        raise ContractViolation("tid out of range")
    decoded = []
    for col in cols:
        raw = col.values[tids].tolist()
        col.reads += len(raw)
        if col.kind is ColumnKind.DICT_STRING:
            deref = col.dict.deref
            cache = {}
            decoded.append([cache[v] if v in cache else cache.setdefault(v, deref(v)) for v in raw])
        else:
            decoded.append(raw)
    params = SeekParams(numberOfRows=rel.row_count, AK=sum(c.width for c in cols), LID=lid,
                        MROW=len(tids), blocksize=blocksize)
    return Fetched(list(zip(*decoded)) if cols else [() for _ in tids], seeks_with_remainder(params))


def _select(values, tids):
    return values if tids is None else values[np.asarray(tids, dtype=np.int64)]


def hash_join_eq(build: Relation, build_column: str, probe: Relation, probe_column: str,
                 build_tids=None, probe_tids=None, hash_fn: HashFunctionId | None = None):
    """Build/probe equi-join; returns ``(build tid, probe tid)`` pairs.

    ``build_tids``/``probe_tids`` restrict either side to a tid subset. Pairs
    come in probe order, build tids ascending within one probe row. The hash
    table uses ``hash_fn`` (default: the build relation's function).
    """
    bcol, pcol = build.column(build_column), probe.column(probe_column)
    if bcol.kind is not pcol.kind:
        raise ContractViolation(f"cannot join {bcol.kind.value} with {pcol.kind.value}")
    fn = (hash_fn or build.hash_fn).code
    btids = _all_tids(build) if build_tids is None else np.asarray(build_tids, dtype=np.int64)
    ptids = _all_tids(probe) if probe_tids is None else np.asarray(probe_tids, dtype=np.int64)
    bvals = np.ascontiguousarray(bcol.values[btids])
    pvals = np.ascontiguousarray(pcol.values[ptids])
    bcol.reads += len(bvals)
    pcol.reads += len(pvals)
    if bcol.kind is ColumnKind.DICT_STRING:
        return _join_strings(bcol, bvals, btids, pcol, pvals, ptids, fn)
    out_b, out_p = _kernels.join_int64(bvals, btids, pvals, ptids, fn)
    return list(zip(out_b, out_p))


def _join_strings(bcol, bvals, btids, pcol, pvals, ptids, fn):
    # codes from different heaps are unrelated, so join on the string bytes
    bkeys = [bcol.dict.deref_bytes(int(v)) for v in bvals]
    nb = 2
    while nb < 2 * len(bkeys):
        nb <<= 1
    mask = nb - 1
    table = [[] for _ in range(nb)]
    for i, h in enumerate(_kernels.hash_many(bkeys, fn)):
        table[h & mask].append(i)
    pcache = {}
    out = []
    for j, v in enumerate(pvals.tolist()):
        key = pcache.get(v)
        if key is None:
            key = pcache[v] = pcol.dict.deref_bytes(v)
        for i in table[_kernels.hash_bytes(key, fn) & mask]:
            if bkeys[i] == key:
                out.append((int(btids[i]), int(ptids[j])))
    return out


def q2_sort_key(row):
    s_acctbal, s_name, n_name, p_partkey = row[0], row[1], row[2], row[3]
    return (-s_acctbal, n_name, s_name, p_partkey)


def run_q2_like(db, size: int | None = Q2_SIZE, type_suffix: str = Q2_TYPE_SUFFIX,
                region: str = Q2_REGION) -> list:
    """Minimum-cost supplier query over part, supplier, partsupp, nation, region.

    ``size=None`` drops the p_size predicate. Every operator runs even when
    an earlier filter comes back empty, so timings cover the whole plan.

    Output rows are ``(s_acctbal, s_name, n_name, p_partkey, p_mfgr,
    s_address, s_phone, s_comment)`` ordered by s_acctbal descending, then
    n_name, s_name, p_partkey.
    """
    for name in ("part", "supplier", "partsupp", "nation", "region"):
        if name not in db:
            raise ContractViolation(f"database lacks relation {name!r}")
    part, supplier, partsupp = db["part"], db["supplier"], db["partsupp"]
    nation, reg = db["nation"], db["region"]

    parts = scan_like_suffix(part, "p_type", type_suffix)
    if size is not None:
        parts = np.intersect1d(hash_scan_eq(part, "p_size", size), parts)
    regions = hash_scan_eq(reg, "r_name", region)
    nations = [p for _, p in hash_join_eq(reg, "r_regionkey", nation, "n_regionkey",
                                          build_tids=regions)]
    supp_nation = {s: n for n, s in hash_join_eq(nation, "n_nationkey", supplier, "s_nationkey",
                                                 build_tids=nations)}
    ps_supp = {p: s for s, p in hash_join_eq(supplier, "s_suppkey", partsupp, "ps_suppkey",
                                             build_tids=sorted(supp_nation))}
    ps_part = hash_join_eq(part, "p_partkey", partsupp, "ps_partkey", build_tids=parts,
                           probe_tids=sorted(ps_supp))

    cost = partsupp.column("ps_supplycost").values
    best = {}
    for pt, pst in ps_part:
        c = int(cost[pst])
        if pt not in best or c < best[pt]:
            best[pt] = c
    winners = [(pt, ps_supp[pst]) for pt, pst in ps_part if int(cost[pst]) == best[pt]]

    srows = fetch_remainder(supplier, [s for _, s in winners],
                            ["s_acctbal", "s_name", "s_address", "s_phone", "s_comment"]).rows
    prows = fetch_remainder(part, [p for p, _ in winners], ["p_partkey", "p_mfgr"]).rows
    nrows = fetch_remainder(nation, [supp_nation[s] for _, s in winners], ["n_name"]).rows
    out = []
    for (acct, sname, addr, phone, comment), (pkey, mfgr), (nname,) in zip(srows, prows, nrows):
        out.append((acct, sname, nname, pkey, mfgr, addr, phone, comment))
    out.sort(key=q2_sort_key)
    return out
