import pytest

from csdict.colstore import dump_tbl_text
from csdict.errors import ContractViolation, ResourceError
from csdict.hashcore import HashFunctionId
from csdict.tpchgen import (P_TYPES, RELATIONS, GenConfig, SplitMix64, cardinalities, dump_tbl,
                            generate, generate_rows, load_dbgen_dir)


def test_splitmix_reference_stream():
    # first outputs for seed 1234567 from the reference SplitMix64 C code
    rng = SplitMix64(1234567)
    assert [rng.next() for _ in range(3)] == [
        6457827717110365317, 3203168211198807973, 9817491932198370423]


def test_config_validation():
    with pytest.raises(ContractViolation):
        GenConfig(scale_rows=0)


def test_deterministic_dumps():
    a = generate(GenConfig(seed=1, scale_rows=20))
    b = generate(GenConfig(seed=1, scale_rows=20))
    for name in RELATIONS:
        assert dump_tbl_text(a[name]) == dump_tbl_text(b[name])
    c = generate(GenConfig(seed=2, scale_rows=20))
    assert dump_tbl_text(c["supplier"]) != dump_tbl_text(a["supplier"])


def test_cardinalities(db100):
    card = db100.cardinalities()
    assert {k: card[k] for k in cardinalities(100)} == cardinalities(100)
    assert card["region"] == 5 and card["nation"] == 25
    assert card["part"] == 200 and card["partsupp"] == 800 and card["customer"] == 150
    assert card["orders"] <= card["lineitem"] <= 7 * card["orders"]


@pytest.mark.parametrize("scale", [1, 2, 3, 7])
def test_small_scales_keep_fixed_tables(scale):
    db = generate(GenConfig(seed=3, scale_rows=scale))
    assert db["region"].row_count == 5 and db["nation"].row_count == 25
    assert db["customer"].row_count == max(1, 3 * scale // 2)


def test_region_names(db100):
    names = {db100["region"].get_value("r_name", t) for t in range(5)}
    assert names == {"AFRICA", "AMERICA", "ASIA", "EUROPE", "MIDDLE EAST"}


def test_p_type_corpus():
    assert len(P_TYPES) == len(set(P_TYPES)) == 150
    assert "SMALL BURNISHED TIN" in P_TYPES


def test_value_domains(rows100):
    sizes = [r[5] for r in rows100["part"]]
    assert min(sizes) >= 1 and max(sizes) <= 50
    assert all(r[4] in P_TYPES for r in rows100["part"])


def test_referential_integrity(rows100):
    keys = {n: {r[0] for r in rows} for n, rows in rows100.items()}
    assert {r[2] for r in rows100["nation"]} <= keys["region"]
    assert {r[3] for r in rows100["supplier"]} <= keys["nation"]
    assert {r[3] for r in rows100["customer"]} <= keys["nation"]
    assert {r[0] for r in rows100["partsupp"]} <= keys["part"]
    assert {r[1] for r in rows100["partsupp"]} <= keys["supplier"]
    assert {r[1] for r in rows100["orders"]} <= keys["customer"]
    assert {r[0] for r in rows100["lineitem"]} <= keys["orders"]
    ps = {(r[0], r[1]) for r in rows100["partsupp"]}
    assert all((r[1], r[2]) in ps for r in rows100["lineitem"])


def test_no_delimiters_in_text(rows100):
    for rows in rows100.values():
        for row in rows:
            for v in row:
                if isinstance(v, str):
                    assert "|" not in v and "\n" not in v


def test_dump_reload_equal(tmp_path, hash_fn):
    db = generate(GenConfig(seed=5, scale_rows=12))
    files = dump_tbl(db, tmp_path)
    assert sorted(p.name for p in files) == sorted(f"{n}.tbl" for n in RELATIONS)
    assert len((tmp_path / "region.tbl").read_text().splitlines()) == 5
    assert load_dbgen_dir(tmp_path, hash_fn) == db


def test_dump_empty_path():
    with pytest.raises(ResourceError):
        dump_tbl(generate(GenConfig(scale_rows=1)), "")


def test_missing_relation_named(tmp_path):
    dump_tbl(generate(GenConfig(scale_rows=2)), tmp_path)
    (tmp_path / "lineitem.tbl").unlink()
    with pytest.raises(ResourceError, match="lineitem"):
        load_dbgen_dir(tmp_path, HashFunctionId.MMH)


def test_generate_rows_matches_database(db100, rows100):
    for name in RELATIONS:
        assert list(db100[name].rows()) == rows100[name]
