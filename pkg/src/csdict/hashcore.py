"""MMH shift-XOR fold, the Jenkins lookup3 baseline, and hash-quality reports.

MMH folds each input byte ``v`` into a 64-bit state starting at zero::

    h ^= (h << 10) + (h >> 7) + v

with wraparound arithmetic and logical shifts. The Jenkins baseline is
``hashlittle`` from lookup3 (12 octets per round plus a final partial block),
widened to 64 bits with zero high bits.
"""

from __future__ import annotations

import enum
from collections import Counter
from dataclasses import dataclass, field

from scipy.stats import chi2

from csdict import _kernels
from csdict.errors import ContractViolation

MASK64 = 0xFFFFFFFFFFFFFFFF

#: Avalanche sample: at most this many keys, every input bit of each.
AVALANCHE_KEYS = 256


class HashFunctionId(enum.Enum):
    MMH = "mmh"
    JENKINS = "jenkins"

    @property
    def code(self) -> int:
        """Kernel function id."""
        return 0 if self is HashFunctionId.MMH else 1

    @property
    def output_bits(self) -> int:
        return 64 if self is HashFunctionId.MMH else 32

    @classmethod
    def parse(cls, name: str) -> "HashFunctionId":
        try:
            return cls(name.lower())
        except ValueError:
            raise ContractViolation(f"unknown hash function {name!r}") from None


def _as_bytes(key) -> bytes:
    if isinstance(key, str):
        return key.encode("utf-8")
    return bytes(key)


def mmh_hash(key) -> int:
    return _kernels.mmh_hash(_as_bytes(key))


def mmh_update(h: int, data) -> int:
    """Continue an MMH fold from state ``h`` over ``data``.

    ``mmh_update(mmh_hash(s), t) == mmh_hash(s + t)``.
    """
    return _kernels.mmh_update(h & MASK64, _as_bytes(data))


def jenkins_hash(key, init: int = 0) -> int:
    if not 0 <= init <= 0xFFFFFFFF:
        raise ContractViolation("init must be a 32-bit unsigned value")
    return _kernels.jenkins_hash(_as_bytes(key), init)


def hash_key(key, fn: HashFunctionId) -> int:
    """Hash ``key`` with ``fn`` as the dictionaries do (Jenkins init fixed to 0)."""
    return _kernels.hash_bytes(_as_bytes(key), fn.code)


def _check_pow2(n: int) -> None:
    if n < 2 or n & (n - 1):
        raise ContractViolation(f"bucket count must be a power of two >= 2, got {n}")


def bucket_of(h: int, nbuckets: int) -> int:
    _check_pow2(nbuckets)
    return h & (nbuckets - 1)


@dataclass
class HashQualityReport:
    nbuckets: int
    key_count: int
    chi_square: float
    max_chain: int
    mean_chain: float
    empty_buckets: int
    avalanche_mean: float
    p_value: float = 1.0
    chain_histogram: dict = field(default_factory=dict)

    def render(self) -> str:
        lines = [
            f"keys            {self.key_count}",
            f"buckets         {self.nbuckets}",
            f"chi_square      {self.chi_square:.4f}  (df={self.nbuckets - 1}, p={self.p_value:.6g})",
            f"max_chain       {self.max_chain}",
            f"mean_chain      {self.mean_chain:.4f}",
            f"empty_buckets   {self.empty_buckets}",
            f"avalanche_mean  {self.avalanche_mean:.4f}",
            "chain histogram (length: buckets)",
        ]
        for length in sorted(self.chain_histogram):
            lines.append(f"  {length:3d}: {self.chain_histogram[length]}")
        return "\n".join(lines)


def avalanche_mean(keys, fn: HashFunctionId) -> float:
    """Mean fraction of output bits flipped by single input-bit flips.

    Uses the first ``AVALANCHE_KEYS`` keys and every bit of each; empty keys
    contribute no trials. Jenkins is measured over its 32 output bits.
    """
    width = fn.output_bits
    flipped = 0
    trials = 0
    code = fn.code
    for key in keys[:AVALANCHE_KEYS]:
        key = _as_bytes(key)
        base = _kernels.hash_bytes(key, code)
        buf = bytearray(key)
        variants = []
        for i in range(len(buf)):
            for bit in range(8):
                buf[i] ^= 1 << bit
                variants.append(bytes(buf))
                buf[i] ^= 1 << bit
        for h in _kernels.hash_many(variants, code):
            flipped += bin(h ^ base).count("1")
        trials += len(variants)
    if not trials:
        return 0.0
    return flipped / (trials * width)


def occupancy_report(occupancy, fn: HashFunctionId, keys) -> HashQualityReport:
    """Summarise per-bucket chain lengths; ``keys`` feed the avalanche sample."""
    nbuckets = len(occupancy)
    key_count = sum(occupancy)
    if key_count:
        expected = key_count / nbuckets
        chi_square = sum((o - expected) ** 2 for o in occupancy) / expected
        p_value = float(chi2.sf(chi_square, nbuckets - 1))
    else:
        chi_square = 0.0
        p_value = 1.0
    return HashQualityReport(
        nbuckets=nbuckets,
        key_count=key_count,
        chi_square=chi_square,
        max_chain=max(occupancy, default=0),
        mean_chain=key_count / nbuckets,
        empty_buckets=sum(1 for o in occupancy if o == 0),
        avalanche_mean=avalanche_mean(keys, fn),
        p_value=p_value,
        chain_histogram=dict(sorted(Counter(occupancy).items())),
    )


def quality_report(keys, fn: HashFunctionId, nbuckets: int) -> HashQualityReport:
    _check_pow2(nbuckets)
    if not keys:
        raise ContractViolation("quality_report needs at least one key")
    keys = [_as_bytes(k) for k in keys]
    mask = nbuckets - 1
    occupancy = [0] * nbuckets
    for h in _kernels.hash_many(keys, fn.code):
        occupancy[h & mask] += 1
    return occupancy_report(occupancy, fn, keys)
