import random

import numpy as np
import pytest

from csdict.colstore import Relation
from csdict.costmodel import SeekParams, seeks_with_remainder
from csdict.errors import ContractViolation
from csdict.hashcore import HashFunctionId
from csdict.scan import (fetch_remainder, hash_join_eq, hash_scan_eq, run_q2_like,
                         scan_like_suffix)
from csdict.tpchgen import GenConfig, build_database, generate, generate_rows
from oracles import q2_oracle


def linear(rel, column, pred):
    return [t for t in range(rel.row_count) if pred(rel.get_value(column, t))]


def test_scan_middle_east(db100):
    reg = db100["region"]
    got = hash_scan_eq(reg, "r_name", "MIDDLE EAST")
    assert got.tolist() == linear(reg, "r_name", lambda v: v == "MIDDLE EAST")
    assert len(got) == 1


def test_scan_miss_reads_nothing(hash_fn):
    db = generate(GenConfig(seed=1, scale_rows=10, out_hash=hash_fn))
    col = db["region"].column("r_name")
    col.reads = 0
    assert hash_scan_eq(db["region"], "r_name", "ATLANTIS").tolist() == []
    assert col.reads == 0
    hash_scan_eq(db["region"], "r_name", "ASIA")
    assert col.reads == 5


def test_scan_p_size(db100):
    part = db100["part"]
    assert hash_scan_eq(part, "p_size", 29).tolist() == linear(part, "p_size", lambda v: v == 29)


def test_scan_kind_mismatch(db100):
    with pytest.raises(ContractViolation):
        hash_scan_eq(db100["part"], "p_size", "29")
    with pytest.raises(ContractViolation):
        hash_scan_eq(db100["part"], "p_type", 29)


def test_like_suffix(db100):
    part = db100["part"]
    assert scan_like_suffix(part, "p_type", "").tolist() == list(range(part.row_count))
    assert scan_like_suffix(part, "p_type", "X" * 200).tolist() == []
    for suffix in (" BURNISHED TIN", "TIN", " STEEL", "PROMO PLATED COPPER"):
        assert scan_like_suffix(part, "p_type", suffix).tolist() == linear(
            part, "p_type", lambda v: v.endswith(suffix))


def test_like_suffix_needs_string_column(db100):
    with pytest.raises(ContractViolation):
        scan_like_suffix(db100["part"], "p_size", "9")


def test_fetch_remainder_empty(db100):
    f = fetch_remainder(db100["supplier"], [], ["s_name"])
    assert f.rows == []
    assert f.seeks == seeks_with_remainder(SeekParams(100, 8, 8, 0, 1))


def test_fetch_remainder_full_column(db100):
    sup = db100["supplier"]
    f = fetch_remainder(sup, np.arange(sup.row_count), ["s_name"])
    assert [r[0] for r in f.rows] == [sup.get_value("s_name", t) for t in range(sup.row_count)]


def test_fetch_remainder_random_subsets(db100):
    rng = random.Random(0)
    cust = db100["customer"]
    cols = ["c_custkey", "c_name", "c_acctbal", "c_mktsegment"]
    for _ in range(20):
        tids = sorted(rng.sample(range(cust.row_count), rng.randint(0, 40)))
        f = fetch_remainder(cust, tids, cols, lid=4, blocksize=2)
        assert f.rows == [tuple(cust.get_value(c, t) for c in cols) for t in tids]
        assert f.seeks == ((cust.row_count * 32 + 4) * 2) + ((len(tids) * 32 + 4) * 2)


def test_fetch_remainder_errors(db100):
    with pytest.raises(ContractViolation):
        fetch_remainder(db100["supplier"], [0], ["zz"])
    with pytest.raises(ContractViolation):
        fetch_remainder(db100["supplier"], [10**6], ["s_name"])


def nested_loop(b, bc, p, pc):
    return sorted((i, j) for i in range(b.row_count) for j in range(p.row_count)
                  if b.get_value(bc, i) == p.get_value(pc, j))


def test_join_nation_region(db100, hash_fn):
    pairs = hash_join_eq(db100["region"], "r_regionkey", db100["nation"], "n_regionkey",
                         hash_fn=hash_fn)
    assert len(pairs) == 25
    assert sorted(pairs) == nested_loop(db100["region"], "r_regionkey", db100["nation"],
                                        "n_regionkey")


def test_join_partsupp_supplier(small_db, hash_fn):
    pairs = hash_join_eq(small_db["partsupp"], "ps_suppkey", small_db["supplier"], "s_suppkey",
                         hash_fn=hash_fn)
    assert sorted(pairs) == nested_loop(small_db["partsupp"], "ps_suppkey",
                                        small_db["supplier"], "s_suppkey")


def test_join_empty_build(db100):
    assert hash_join_eq(db100["region"], "r_regionkey", db100["nation"], "n_regionkey",
                        build_tids=[]) == []


def test_join_on_strings_across_heaps(hash_fn):
    a = Relation("a", [("s", "string")], hash_fn)
    b = Relation("b", [("s", "string")], HashFunctionId.MMH)
    for s in ["x", "y", "x", "z"]:
        a.append_row([s])
    for s in ["z", "x", "w"]:
        b.append_row([s])
    assert sorted(hash_join_eq(a, "s", b, "s")) == [(0, 1), (2, 1), (3, 0)]


def test_join_kind_mismatch(db100):
    with pytest.raises(ContractViolation):
        hash_join_eq(db100["region"], "r_name", db100["nation"], "n_regionkey")


def test_q2_empty_when_no_size_29(rows100):
    rows = dict(rows100)
    rows["part"] = [r[:5] + (30 if r[5] == 29 else r[5],) + r[6:] for r in rows100["part"]]
    db = build_database(rows, HashFunctionId.MMH)
    assert run_q2_like(db) == []


@pytest.mark.parametrize("kwargs", [{}, {"size": None, "type_suffix": ""},
                                    {"size": None, "type_suffix": "TIN"},
                                    {"size": None, "type_suffix": "", "region": "ASIA"}])
def test_q2_matches_oracle(rows100, db100, kwargs):
    want = q2_oracle(rows100, **{"suffix" if k == "type_suffix" else k: v
                                 for k, v in kwargs.items()})
    assert run_q2_like(db100, **kwargs) == want


def test_q2_same_under_both_functions(rows100):
    a = build_database(rows100, HashFunctionId.MMH)
    b = build_database(rows100, HashFunctionId.JENKINS)
    assert run_q2_like(a, size=None, type_suffix="") == run_q2_like(b, size=None, type_suffix="")


def test_q2_argmin_invariant_under_scaling(rows100):
    def picks(rows):
        out = run_q2_like(build_database(rows, HashFunctionId.MMH), size=None, type_suffix="")
        return [(r[3], r[1]) for r in out]

    scaled = dict(rows100)
    scaled["partsupp"] = [r[:3] + (2 * r[3],) + r[4:] for r in rows100["partsupp"]]
    assert sorted(picks(scaled)) == sorted(picks(rows100))


def test_q2_ordering_total(db100):
    out = run_q2_like(db100, size=None, type_suffix="")
    keys = [(-r[0], r[2], r[1], r[3]) for r in out]
    assert keys == sorted(keys)
    assert len(set(keys)) == len(keys)


def test_q2_missing_relation(db100):
    from csdict.tpchgen import Database
    db = Database({k: v for k, v in db100.relations.items() if k != "region"})
    with pytest.raises(ContractViolation):
        run_q2_like(db)


@pytest.mark.parametrize("seed", [11, 12])
def test_operators_equal_oracles_both_functions(seed):
    rows = generate_rows(GenConfig(seed=seed, scale_rows=12))
    dbs = [build_database(rows, fn) for fn in HashFunctionId]
    for db in dbs:
        part = db["part"]
        for size in (1, 25, 50):
            assert hash_scan_eq(part, "p_size", size).tolist() == [
                i for i, r in enumerate(rows["part"]) if r[5] == size]
        assert scan_like_suffix(part, "p_type", "BRASS").tolist() == [
            i for i, r in enumerate(rows["part"]) if r[4].endswith("BRASS")]
        assert sorted(hash_join_eq(db["supplier"], "s_suppkey", db["partsupp"], "ps_suppkey")) \
            == sorted((i, j) for i, s in enumerate(rows["supplier"])
                      for j, ps in enumerate(rows["partsupp"]) if s[0] == ps[1])
        assert run_q2_like(db, size=None, type_suffix="") == q2_oracle(rows, size=None, suffix="")
