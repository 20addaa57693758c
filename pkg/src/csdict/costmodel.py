"""Selectivity, pdf and seek-count formulas for hash scans.

Selectivity is ``n / distinct``, the average number of rows per distinct
key, and the pdf is its reciprocal. Both are exact rationals.

Seek counts follow the printed formulas literally::

    scanned   = (numberOfRows * AK + LID) * blocksize
    remainder = scanned + (MROW * AK + LID) * blocksize

``interpretation="divide"`` swaps each ``* blocksize`` for a ceiling
division, which turns byte volumes into block counts.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from csdict.errors import ContractViolation

INT64_MAX = (1 << 63) - 1

Rational = Fraction


@dataclass(frozen=True)
class SelectivityStats:
    n: int
    distinct: int


@dataclass(frozen=True)
class SeekParams:
    numberOfRows: int
    AK: int
    LID: int
    MROW: int = 0
    blocksize: int = 1

    def __post_init__(self):
        for name in ("numberOfRows", "AK", "LID", "MROW"):
            if getattr(self, name) < 0:
                raise ContractViolation(f"{name} must be non-negative")
        if self.blocksize < 1:
            raise ContractViolation("blocksize must be at least 1")


def selectivity(s: SelectivityStats) -> Fraction:
    if s.distinct < 1:
        raise ContractViolation("distinct must be at least 1")
    if s.n < 1 or s.distinct > s.n:
        raise ContractViolation(f"need 1 <= distinct <= n, got n={s.n} distinct={s.distinct}")
    return Fraction(s.n, s.distinct)


def pdf(sel) -> Fraction:
    sel = Fraction(sel)
    if sel <= 0:
        raise ContractViolation("selectivity must be positive")
    return 1 / sel


def _checked(v: int) -> int:
    if v > INT64_MAX:
        raise OverflowError("seek count exceeds 64-bit range")
    return v


def _term(rows: int, p: SeekParams, interpretation: str) -> int:
    volume = _checked(_checked(rows * p.AK) + p.LID)
    if interpretation == "literal":
        return _checked(volume * p.blocksize)
    if interpretation == "divide":
        return -(-volume // p.blocksize)
    raise ContractViolation(f"unknown interpretation {interpretation!r}")


def seeks_scanned_segment(p: SeekParams, interpretation: str = "literal") -> int:
    """Seeks to read the scanned segment."""
    return _term(p.numberOfRows, p, interpretation)


def seeks_with_remainder(p: SeekParams, interpretation: str = "literal") -> int:
    """Seeks for the scanned segment plus fetching the ``MROW`` matched tuples."""
    return _checked(_term(p.numberOfRows, p, interpretation) + _term(p.MROW, p, interpretation))
