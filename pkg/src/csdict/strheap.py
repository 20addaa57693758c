"""Append-only string heap with chained hash buckets.

Entry layout at entry offset ``o`` (always a multiple of 8)::

    o        8-byte little-endian link: payload offset of the next entry
             in the same bucket, 0 terminates the chain
    o + 8    string bytes, NUL, zero padding up to a multiple of 8

Bucket heads and links hold payload offsets (``o + 8``), so 0 is free to
mean nil even for the entry at offset 0. An element reference is the payload
offset shifted right by three: the first string stored in a fresh heap gets
reference 1.
"""

from __future__ import annotations

from array import array
from bisect import bisect_left

from csdict import _kernels
from csdict.errors import ContractViolation, ResourceError
from csdict.hashcore import HashFunctionId, HashQualityReport, _check_pow2, occupancy_report

DEFAULT_BUCKETS = 1 << 10
DEFAULT_CAPACITY = DEFAULT_BUCKETS * 8
MAX_STRING = 1 << 31
MAX_LOAD = 0.75


class StringHeap:
    """Deduplicating string dictionary over a byte arena.

    Single writer. Once loading is done the heap can be shared by any number
    of readers as long as nobody inserts.
    """

    def __init__(self, initial_buckets: int = DEFAULT_BUCKETS,
                 initial_capacity: int = DEFAULT_CAPACITY,
                 hash_fn: HashFunctionId = HashFunctionId.MMH):
        _check_pow2(initial_buckets)
        if initial_capacity < 64:
            raise ContractViolation("initial_capacity must be at least 64 bytes")
        if not isinstance(hash_fn, HashFunctionId):
            raise ContractViolation(f"not a hash function id: {hash_fn!r}")
        try:
            self._arena = bytearray(initial_capacity)
            self._buckets = array("Q", bytes(8 * initial_buckets))
        except MemoryError as exc:
            raise ResourceError("string heap allocation failed") from exc
        self.free = 0
        self.hash_fn = hash_fn
        self._fn = hash_fn.code
        self._offsets = array("Q")  # payload offsets, ascending by construction

    # -- introspection ----------------------------------------------------

    @property
    def nbuckets(self) -> int:
        return len(self._buckets)

    @property
    def mask(self) -> int:
        return len(self._buckets) - 1

    @property
    def capacity(self) -> int:
        return len(self._arena)

    @property
    def entry_count(self) -> int:
        return len(self._offsets)

    def __len__(self) -> int:
        return len(self._offsets)

    def bucket_head(self, b: int) -> int:
        return self._buckets[b]

    def arena_bytes(self) -> bytes:
        """Copy of the written part of the arena."""
        return bytes(self._arena[:self.free])

    # -- operations -------------------------------------------------------

    @staticmethod
    def _encode(s) -> bytes:
        key = s.encode("utf-8") if isinstance(s, str) else bytes(s)
        if b"\0" in key:
            raise ContractViolation("strings may not contain NUL bytes")
        if len(key) > MAX_STRING:
            raise ContractViolation("string longer than 2**31 bytes")
        return key

    def insert(self, s) -> int:
        """Store ``s`` if absent and return its element reference."""
        key = self._encode(s)
        b, p = _kernels.probe(self._arena, self._buckets, self._fn, key)
        if p:
            return p >> 3
        if len(self._offsets) + 1 > MAX_LOAD * len(self._buckets):
            self.grow()
            b = _kernels.hash_bytes(key, self._fn) & (len(self._buckets) - 1)
        o = self.free
        payload = o + 8
        end = (payload + len(key) + 1 + 7) & ~7
        if end > len(self._arena):
            self._reserve(end)
        arena = self._arena
        arena[o:payload] = self._buckets[b].to_bytes(8, "little")
        arena[payload:payload + len(key)] = key
        self._buckets[b] = payload
        self._offsets.append(payload)
        self.free = end
        return payload >> 3

    def lookup(self, s) -> int | None:
        """Element reference of ``s``, or ``None`` when it is not stored."""
        _, p = _kernels.probe(self._arena, self._buckets, self._fn, self._encode(s))
        return p >> 3 if p else None

    def _check_ref(self, r: int) -> int:
        p = r << 3
        i = bisect_left(self._offsets, p)
        if r < 1 or p >= self.free or i == len(self._offsets) or self._offsets[i] != p:
            raise ContractViolation(f"element reference {r} is not a string in this heap")
        return p

    def deref_bytes(self, r: int) -> bytes:
        p = self._check_ref(r)
        return bytes(self._arena[p:self._arena.index(0, p)])

    def deref(self, r: int) -> str:
        return self.deref_bytes(r).decode("utf-8")

    def __contains__(self, s) -> bool:
        return self.lookup(s) is not None

    def refs(self):
        """Element references in insertion order."""
        return [p >> 3 for p in self._offsets]

    def items(self):
        """Yield ``(ref, bytes)`` for every stored string in insertion order."""
        arena = self._arena
        for p in self._offsets:
            yield p >> 3, bytes(arena[p:arena.index(0, p)])

    def grow(self) -> None:
        """Double the bucket table and re-thread every chain.

        ``insert`` calls this when the load factor would pass 0.75. Entries
        never move, so element references stay valid.
        """
        try:
            buckets = array("Q", bytes(16 * len(self._buckets)))
        except MemoryError as exc:
            raise ResourceError("bucket table growth failed") from exc
        _kernels.rebuild(self._arena, self.free, buckets, self._fn)
        self._buckets = buckets

    def _reserve(self, need: int) -> None:
        size = len(self._arena)
        while size < need:
            size *= 2
        try:
            self._arena.extend(bytes(size - len(self._arena)))
        except MemoryError as exc:
            raise ResourceError("string heap arena growth failed") from exc

    # -- diagnostics ------------------------------------------------------

    def chain_lengths(self) -> list:
        return _kernels.chain_lengths(self._arena, self._buckets)

    def stats(self) -> HashQualityReport:
        keys = [k for _, k in self.items()]
        return occupancy_report(self.chain_lengths(), self.hash_fn, keys)

    def dump(self) -> str:
        """One ``offset<TAB>bucket<TAB>string`` line per entry, in arena order."""
        lines = []
        for r, key in self.items():
            b = _kernels.hash_bytes(key, self._fn) & self.mask
            lines.append(f"{(r << 3) - 8}\t{b}\t{key.decode('utf-8')}")
        return "\n".join(lines) + ("\n" if lines else "")


def heap_alloc(initial_buckets: int = DEFAULT_BUCKETS, initial_capacity: int = DEFAULT_CAPACITY,
               hash_fn: HashFunctionId = HashFunctionId.MMH) -> StringHeap:
    return StringHeap(initial_buckets, initial_capacity, hash_fn)
