"""Deterministic desk-scale TPC-H style generator and ``.tbl`` directory I/O.

Random numbers come from SplitMix64 (see README): the state starts at the
seed, each draw adds 0x9E3779B97F4A7C15 and mixes the state with two
multiply-xorshift rounds. ``uniform(lo, hi)`` is ``lo + draw % (hi - lo + 1)``.

Cardinalities for ``scale_rows = S``: region 5, nation 25, supplier S,
part 2S, partsupp 4 per part, customer max(1, floor(1.5 S)), orders 10 per
customer, lineitem 1..7 per order. Comments and addresses come from small
word pools rather than the official dbgen grammar.
"""

from __future__ import annotations

import datetime as _dt
from dataclasses import dataclass, field
from pathlib import Path

from csdict.colstore import Relation, dump_tbl as _dump_relation, load_tbl
from csdict.errors import ContractViolation, ResourceError
from csdict.hashcore import HashFunctionId

I, D, T, S = "int64", "decimal", "date", "string"

SCHEMAS = {
    "region": [("r_regionkey", I), ("r_name", S), ("r_comment", S)],
    "nation": [("n_nationkey", I), ("n_name", S), ("n_regionkey", I), ("n_comment", S)],
    "supplier": [("s_suppkey", I), ("s_name", S), ("s_address", S), ("s_nationkey", I),
                 ("s_phone", S), ("s_acctbal", D), ("s_comment", S)],
    "customer": [("c_custkey", I), ("c_name", S), ("c_address", S), ("c_nationkey", I),
                 ("c_phone", S), ("c_acctbal", D), ("c_mktsegment", S), ("c_comment", S)],
    "part": [("p_partkey", I), ("p_name", S), ("p_mfgr", S), ("p_brand", S), ("p_type", S),
             ("p_size", I), ("p_container", S), ("p_retailprice", D), ("p_comment", S)],
    "partsupp": [("ps_partkey", I), ("ps_suppkey", I), ("ps_availqty", I),
                 ("ps_supplycost", D), ("ps_comment", S)],
    "orders": [("o_orderkey", I), ("o_custkey", I), ("o_orderstatus", S), ("o_totalprice", D),
               ("o_orderdate", T), ("o_orderpriority", S), ("o_clerk", S),
               ("o_shippriority", I), ("o_comment", S)],
    "lineitem": [("l_orderkey", I), ("l_partkey", I), ("l_suppkey", I), ("l_linenumber", I),
                 ("l_quantity", I), ("l_extendedprice", D), ("l_discount", D), ("l_tax", D),
                 ("l_returnflag", S), ("l_linestatus", S), ("l_shipdate", T),
                 ("l_commitdate", T), ("l_receiptdate", T), ("l_shipinstruct", S),
                 ("l_shipmode", S), ("l_comment", S)],
}
RELATIONS = tuple(SCHEMAS)

REGIONS = ["AFRICA", "AMERICA", "ASIA", "EUROPE", "MIDDLE EAST"]
NATIONS = [
    ("ALGERIA", 0), ("ARGENTINA", 1), ("BRAZIL", 1), ("CANADA", 1), ("EGYPT", 4),
    ("ETHIOPIA", 0), ("FRANCE", 3), ("GERMANY", 3), ("INDIA", 2), ("INDONESIA", 2),
    ("IRAN", 4), ("IRAQ", 4), ("JAPAN", 2), ("JORDAN", 4), ("KENYA", 0),
    ("MOROCCO", 0), ("MOZAMBIQUE", 0), ("PERU", 1), ("CHINA", 2), ("ROMANIA", 3),
    ("SAUDI ARABIA", 4), ("VIETNAM", 2), ("RUSSIA", 3), ("UNITED KINGDOM", 3),
    ("UNITED STATES", 1),
]
TYPE_SYLLABLE_1 = ["STANDARD", "SMALL", "MEDIUM", "LARGE", "ECONOMY", "PROMO"]
TYPE_SYLLABLE_2 = ["ANODIZED", "BURNISHED", "PLATED", "POLISHED", "BRUSHED"]
TYPE_SYLLABLE_3 = ["TIN", "NICKEL", "BRASS", "STEEL", "COPPER"]
P_TYPES = [f"{a} {b} {c}" for a in TYPE_SYLLABLE_1 for b in TYPE_SYLLABLE_2 for c in TYPE_SYLLABLE_3]
CONTAINER_1 = ["SM", "LG", "MED", "JUMBO", "WRAP"]
CONTAINER_2 = ["CASE", "BOX", "BAG", "JAR", "PKG", "PACK", "CAN", "DRUM"]
COLORS = [
    "almond", "antique", "aquamarine", "azure", "beige", "bisque", "black", "blanched",
    "blue", "blush", "brown", "burlywood", "burnished", "chartreuse", "chiffon", "chocolate",
    "coral", "cornflower", "cornsilk", "cream", "cyan", "dark", "deep", "dim", "dodger",
    "drab", "firebrick", "floral", "forest", "frosted", "gainsboro", "ghost", "goldenrod",
    "green", "grey", "honeydew", "hot", "indian", "ivory", "khaki",
]
SEGMENTS = ["AUTOMOBILE", "BUILDING", "FURNITURE", "MACHINERY", "HOUSEHOLD"]
PRIORITIES = ["1-URGENT", "2-HIGH", "3-MEDIUM", "4-NOT SPECIFIED", "5-LOW"]
INSTRUCTIONS = ["DELIVER IN PERSON", "COLLECT COD", "NONE", "TAKE BACK RETURN"]
MODES = ["REG AIR", "AIR", "RAIL", "SHIP", "TRUCK", "MAIL", "FOB"]
WORDS = [
    "furiously", "quickly", "carefully", "blithely", "slyly", "final", "regular", "express",
    "ironic", "pending", "bold", "silent", "unusual", "special", "even", "idle", "ruthless",
    "deposits", "requests", "packages", "accounts", "instructions", "theodolites", "pinto",
    "beans", "foxes", "ideas", "dependencies", "excuses", "platelets", "asymptotes",
    "courts", "dolphins", "sheaves", "sauternes", "warhorses", "about", "above", "across",
    "after", "against", "along", "among", "around", "wake", "sleep", "nag", "haggle",
    "cajole", "boost", "detect", "integrate", "use", "print",
]
ADDRESS_CHARS = "abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ0123456789 ,"

_EPOCH = _dt.date(1970, 1, 1).toordinal()
START_DATE = _dt.date(1992, 1, 1).toordinal() - _EPOCH
END_DATE = _dt.date(1998, 12, 31).toordinal() - _EPOCH
CURRENT_DATE = _dt.date(1995, 6, 17).toordinal() - _EPOCH

MASK64 = 0xFFFFFFFFFFFFFFFF


class SplitMix64:
    """64-bit SplitMix generator; identical streams in any language."""

    def __init__(self, seed: int):
        self.state = seed & MASK64

    def next(self) -> int:
        self.state = (self.state + 0x9E3779B97F4A7C15) & MASK64
        z = self.state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
        return z ^ (z >> 31)

    def uniform(self, lo: int, hi: int) -> int:
        return lo + self.next() % (hi - lo + 1)

    def choice(self, seq):
        return seq[self.next() % len(seq)]


@dataclass(frozen=True)
class GenConfig:
    seed: int = 1
    scale_rows: int = 100
    out_hash: HashFunctionId = HashFunctionId.MMH

    def __post_init__(self):
        if self.scale_rows < 1:
            raise ContractViolation("scale_rows must be at least 1")


def cardinalities(scale_rows: int) -> dict:
    """Fixed relation sizes; lineitem is only known after generation."""
    customers = max(1, (3 * scale_rows) // 2)
    return {
        "region": 5, "nation": 25, "supplier": scale_rows, "part": 2 * scale_rows,
        "partsupp": 8 * scale_rows, "customer": customers, "orders": 10 * customers,
    }


def part_suppliers(partkey: int, nsupp: int) -> list:
    """The four supplier keys of a part (dbgen's spreading formula)."""
    return [(partkey + i * (nsupp // 4 + (partkey - 1) // nsupp)) % nsupp + 1 for i in range(4)]


def retail_price(partkey: int) -> int:
    return 90000 + (partkey // 10) % 20001 + 100 * (partkey % 1000)


def _text(rng: SplitMix64, lo: int, hi: int) -> str:
    return " ".join(rng.choice(WORDS) for _ in range(rng.uniform(lo, hi)))


def _address(rng: SplitMix64) -> str:
    return "".join(rng.choice(ADDRESS_CHARS) for _ in range(rng.uniform(10, 25))).strip() or "x"


def _phone(rng: SplitMix64, nationkey: int) -> str:
    return (f"{nationkey + 10:02d}-{rng.uniform(100, 999)}-"
            f"{rng.uniform(100, 999)}-{rng.uniform(1000, 9999)}")


def generate_rows(cfg: GenConfig) -> dict:
    """Raw rows per relation, as tuples of ints and strings."""
    rng = SplitMix64(cfg.seed)
    card = cardinalities(cfg.scale_rows)
    nsupp, nparts, ncust = card["supplier"], card["part"], card["customer"]
    rows = {}
    rows["region"] = [(i, name, _text(rng, 3, 8)) for i, name in enumerate(REGIONS)]
    rows["nation"] = [(i, name, rk, _text(rng, 3, 10)) for i, (name, rk) in enumerate(NATIONS)]

    supplier = []
    for sk in range(1, nsupp + 1):
        nk = rng.uniform(0, 24)
        supplier.append((sk, f"Supplier#{sk:09d}", _address(rng), nk, _phone(rng, nk),
                         rng.uniform(-99999, 999999), _text(rng, 4, 12)))
    rows["supplier"] = supplier

    part, partsupp = [], []
    for pk in range(1, nparts + 1):
        name = []
        while len(name) < 5:
            c = rng.choice(COLORS)
            if c not in name:
                name.append(c)
        m = rng.uniform(1, 5)
        part.append((pk, " ".join(name), f"Manufacturer#{m}", f"Brand#{m}{rng.uniform(1, 5)}",
                     rng.choice(P_TYPES), rng.uniform(1, 50),
                     f"{rng.choice(CONTAINER_1)} {rng.choice(CONTAINER_2)}",
                     retail_price(pk), _text(rng, 2, 6)))
        for sk in part_suppliers(pk, nsupp):
            partsupp.append((pk, sk, rng.uniform(1, 9999), rng.uniform(100, 100000),
                             _text(rng, 5, 15)))
    rows["part"], rows["partsupp"] = part, partsupp

    customer = []
    for ck in range(1, ncust + 1):
        nk = rng.uniform(0, 24)
        customer.append((ck, f"Customer#{ck:09d}", _address(rng), nk, _phone(rng, nk),
                         rng.uniform(-99999, 999999), rng.choice(SEGMENTS), _text(rng, 4, 12)))
    rows["customer"] = customer

    orders, lineitem = [], []
    nclerks = max(1, nsupp)
    for ok in range(1, card["orders"] + 1):
        ck = rng.uniform(1, ncust)
        od = rng.uniform(START_DATE, END_DATE - 151)
        total = 0
        statuses = set()
        for ln in range(1, rng.uniform(1, 7) + 1):
            pk = rng.uniform(1, nparts)
            sk = part_suppliers(pk, nsupp)[rng.uniform(0, 3)]
            qty = rng.uniform(1, 50)
            ext = qty * retail_price(pk)
            disc = rng.uniform(0, 10)
            tax = rng.uniform(0, 8)
            ship = od + rng.uniform(1, 121)
            commit = od + rng.uniform(30, 90)
            receipt = ship + rng.uniform(1, 30)
            if receipt <= CURRENT_DATE:
                flag = "R" if rng.uniform(0, 1) else "A"
            else:
                flag = "N"
            status = "O" if ship > CURRENT_DATE else "F"
            statuses.add(status)
            total += ext * (100 + tax) * (100 - disc) // 10000
            lineitem.append((ok, pk, sk, ln, qty, ext, disc, tax, flag, status, ship, commit,
                             receipt, rng.choice(INSTRUCTIONS), rng.choice(MODES),
                             _text(rng, 2, 8)))
        ostatus = statuses.pop() if len(statuses) == 1 else "P"
        orders.append((ok, ck, ostatus, total, od, rng.choice(PRIORITIES),
                       f"Clerk#{rng.uniform(1, nclerks):09d}", 0, _text(rng, 3, 10)))
    rows["orders"], rows["lineitem"] = orders, lineitem

    for name, n in card.items():
        assert len(rows[name]) == n, (name, len(rows[name]), n)
    assert card["orders"] <= len(lineitem) <= 7 * card["orders"]
    return {name: rows[name] for name in RELATIONS}


@dataclass
class Database:
    relations: dict = field(default_factory=dict)
    hash_fn: HashFunctionId = HashFunctionId.MMH

    def __getitem__(self, name: str) -> Relation:
        try:
            return self.relations[name]
        except KeyError:
            raise ContractViolation(f"database has no relation {name!r}") from None

    def __contains__(self, name: str) -> bool:
        return name in self.relations

    def __eq__(self, other):
        if not isinstance(other, Database):
            return NotImplemented
        return self.relations.keys() == other.relations.keys() and all(
            self.relations[k] == other.relations[k] for k in self.relations)

    def cardinalities(self) -> dict:
        return {name: rel.row_count for name, rel in self.relations.items()}


def new_relation(name: str, hash_fn: HashFunctionId) -> Relation:
    return Relation(name, SCHEMAS[name], hash_fn)


def build_database(rows: dict, hash_fn: HashFunctionId) -> Database:
    db = Database(hash_fn=hash_fn)
    for name in RELATIONS:
        rel = new_relation(name, hash_fn)
        for row in rows[name]:
            rel.append_row(row)
        db.relations[name] = rel
    return db


def generate(cfg: GenConfig) -> Database:
    return build_database(generate_rows(cfg), cfg.out_hash)


def _directory(directory) -> Path:
    if directory is None or str(directory) == "":
        raise ResourceError("output directory path is empty")
    return Path(directory)


def dump_tbl(db: Database, directory) -> list:
    """Write ``<relation>.tbl`` for every relation; returns the paths."""
    out = _directory(directory)
    try:
        out.mkdir(parents=True, exist_ok=True)
    except OSError as exc:
        raise ResourceError(f"cannot create {out}: {exc}") from exc
    return [_dump_relation(db.relations[name], out / f"{name}.tbl")
            for name in RELATIONS if name in db.relations]


def tbl_path(directory, name: str) -> Path:
    path = _directory(directory) / f"{name}.tbl"
    if not path.is_file():
        raise ResourceError(f"missing relation {name}: {path} not found")
    return path


def load_relation(directory, name: str, hash_fn: HashFunctionId) -> Relation:
    rel = new_relation(name, hash_fn)
    load_tbl(tbl_path(directory, name), rel)
    return rel


def load_dbgen_dir(directory, hash_fn: HashFunctionId = HashFunctionId.MMH) -> Database:
    for name in RELATIONS:
        tbl_path(directory, name)
    db = Database(hash_fn=hash_fn)
    for name in RELATIONS:
        db.relations[name] = load_relation(directory, name, hash_fn)
    return db
