"""Minimal column store over 64-bit value vectors and string dictionaries.

Every column holds one int64 per row: the raw value for fixed-width kinds,
or the element reference into the column's own ``StringHeap`` for
dictionary-encoded strings. All widths are 8 bytes.
"""

from __future__ import annotations

import datetime as _dt
import enum
import re
from pathlib import Path

import numpy as np

from csdict.errors import ContractViolation, ParseError, ResourceError
from csdict.hashcore import HashFunctionId
from csdict.strheap import StringHeap

VALUE_WIDTH = 8
_EPOCH = _dt.date(1970, 1, 1).toordinal()
_DECIMAL = re.compile(r"-?\d+\.\d\d")
_INT = re.compile(r"-?\d+")
_DATE = re.compile(r"\d{4}-\d\d-\d\d")


class ColumnKind(enum.Enum):
    INT64 = "int64"
    DECIMAL_CENTS = "decimal"
    DATE_DAYS = "date"
    DICT_STRING = "string"


def parse_decimal(text: str) -> int:
    """``"-12.34"`` -> ``-1234`` hundredths."""
    if not _DECIMAL.fullmatch(text):
        raise ValueError(f"bad decimal {text!r}")
    return int(text.replace(".", ""))


def format_decimal(cents: int) -> str:
    sign = "-" if cents < 0 else ""
    whole, frac = divmod(abs(cents), 100)
    return f"{sign}{whole}.{frac:02d}"


def parse_date(text: str) -> int:
    """ISO ``YYYY-MM-DD`` -> days since 1970-01-01."""
    if not _DATE.fullmatch(text):
        raise ValueError(f"bad date {text!r}")
    return _dt.date.fromisoformat(text).toordinal() - _EPOCH


def format_date(days: int) -> str:
    return _dt.date.fromordinal(days + _EPOCH).isoformat()


def parse_int(text: str) -> int:
    if not _INT.fullmatch(text):
        raise ValueError(f"bad integer {text!r}")
    return int(text)


class Column:
    def __init__(self, name: str, kind: ColumnKind, hash_fn: HashFunctionId):
        self.name = name
        self.kind = kind
        self.dict = StringHeap(hash_fn=hash_fn) if kind is ColumnKind.DICT_STRING else None
        self._buf = np.zeros(16, dtype=np.int64)
        self._n = 0
        # elements of the value vector touched by scans
        self.reads = 0

    @property
    def width(self) -> int:
        """Attribute length in bytes, as used by the seek cost model."""
        return VALUE_WIDTH

    @property
    def values(self) -> np.ndarray:
        """Read-only view of the value (or code) vector."""
        v = self._buf[:self._n]
        v.flags.writeable = False
        return v

    def __len__(self) -> int:
        return self._n

    def _encode(self, cell) -> int:
        kind = self.kind
        if kind is ColumnKind.DICT_STRING:
            if not isinstance(cell, str):
                raise ContractViolation(f"{self.name}: expected str, got {type(cell).__name__}")
            return self.dict.insert(cell)
        if isinstance(cell, bool) or not isinstance(cell, (int, np.integer)):
            raise ContractViolation(f"{self.name}: expected int, got {type(cell).__name__}")
        return int(cell)

    def _push(self, v: int) -> None:
        if self._n == len(self._buf):
            self._buf = np.resize(self._buf, 2 * len(self._buf))
        self._buf[self._n] = v
        self._n += 1

    def decode(self, v: int):
        if self.kind is ColumnKind.DICT_STRING:
            return self.dict.deref(int(v))
        return int(v)


class Relation:
    """Named set of equal-length columns addressed by row ordinal."""

    def __init__(self, name: str, schema, hash_fn: HashFunctionId = HashFunctionId.MMH):
        schema = list(schema)
        if not schema:
            raise ContractViolation("schema must have at least one column")
        names = [n for n, _ in schema]
        if len(set(names)) != len(names):
            raise ContractViolation(f"duplicate column names in {name}: {names}")
        self.name = name
        self.hash_fn = hash_fn
        self.columns = [Column(n, ColumnKind(k), hash_fn) for n, k in schema]
        self._by_name = {c.name: c for c in self.columns}
        self.row_count = 0

    @property
    def schema(self):
        return [(c.name, c.kind) for c in self.columns]

    def column(self, name: str) -> Column:
        try:
            return self._by_name[name]
        except KeyError:
            raise ContractViolation(f"no column {name!r} in {self.name}") from None

    def append_row(self, values) -> int:
        values = list(values)
        if len(values) != len(self.columns):
            raise ContractViolation(
                f"{self.name}: expected {len(self.columns)} values, got {len(values)}")
        encoded = [c._encode(v) for c, v in zip(self.columns, values)]
        for c, v in zip(self.columns, encoded):
            c._push(v)
        self.row_count += 1
        return self.row_count - 1

    def get_value(self, column: str, t: int):
        col = self.column(column)
        if not 0 <= t < self.row_count:
            raise ContractViolation(f"tuple id {t} out of range for {self.name} ({self.row_count} rows)")
        return col.decode(col._buf[t])

    def distinct_count(self, column: str) -> int:
        return int(np.unique(self.column(column).values).size)

    def rows(self):
        """Yield every row as a tuple of decoded cells."""
        decoded = []
        for c in self.columns:
            if c.kind is ColumnKind.DICT_STRING:
                lut = {r: s.decode("utf-8") for r, s in c.dict.items()}
                decoded.append([lut[v] for v in c.values.tolist()])
            else:
                decoded.append(c.values.tolist())
        return zip(*decoded)

    def __eq__(self, other):
        if not isinstance(other, Relation):
            return NotImplemented
        return (self.name == other.name and self.schema == other.schema
                and list(self.rows()) == list(other.rows()))

    def __repr__(self):
        return f"Relation({self.name!r}, {len(self.columns)} columns, {self.row_count} rows)"


def relation_create(name: str, schema, hash_fn: HashFunctionId = HashFunctionId.MMH) -> Relation:
    return Relation(name, schema, hash_fn)


_PARSERS = {
    ColumnKind.INT64: parse_int,
    ColumnKind.DECIMAL_CENTS: parse_decimal,
    ColumnKind.DATE_DAYS: parse_date,
}
_FORMATTERS = {
    ColumnKind.INT64: str,
    ColumnKind.DECIMAL_CENTS: format_decimal,
    ColumnKind.DATE_DAYS: format_date,
}


def load_tbl_text(text: str, rel: Relation, path=None) -> int:
    """Append the rows of dbgen-style ``text`` to ``rel``."""
    arity = len(rel.columns)
    parsers = [_PARSERS.get(c.kind) for c in rel.columns]
    cols = rel.columns
    count = 0
    lines = text.split("\n")
    if lines and lines[-1] == "":
        lines.pop()
    for lineno, line in enumerate(lines, 1):
        if not line.endswith("|"):
            raise ParseError("line does not end with '|'", path, lineno)
        fields = line[:-1].split("|")
        if len(fields) != arity:
            raise ParseError(f"expected {arity} fields, found {len(fields)}", path, lineno)
        try:
            cells = [f if p is None else p(f) for p, f in zip(parsers, fields)]
        except ValueError as exc:
            raise ParseError(str(exc), path, lineno) from None
        for c, v in zip(cols, cells):
            c._push(c.dict.insert(v) if c.dict is not None else v)
        rel.row_count += 1
        count += 1
    return count


def load_tbl(path, rel: Relation) -> int:
    """Append every line of a ``.tbl`` file to ``rel``; returns rows loaded."""
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ResourceError(f"cannot read {path}: {exc}") from exc
    return load_tbl_text(text, rel, path)


def dump_tbl_text(rel: Relation) -> str:
    fmts = [_FORMATTERS.get(c.kind, str) for c in rel.columns]
    for c in rel.columns:
        if c.dict is not None:
            for _, s in c.dict.items():
                if b"|" in s or b"\n" in s:
                    raise ContractViolation(f"{rel.name}.{c.name}: {s!r} cannot be written to .tbl")
    out = []
    for row in rel.rows():
        out.append("|".join(f(v) for f, v in zip(fmts, row)) + "|\n")
    return "".join(out)


def dump_tbl(rel: Relation, path) -> Path:
    path = Path(path)
    try:
        path.write_text(dump_tbl_text(rel), encoding="utf-8")
    except OSError as exc:
        raise ResourceError(f"cannot write {path}: {exc}") from exc
    return path
