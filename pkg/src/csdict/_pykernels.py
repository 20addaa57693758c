"""Pure-Python hot kernels.

Same surface as the compiled ``_ckernels`` module; selected by
``csdict._kernels`` when the extension is missing or ``CSDICT_PURE`` is set.
Function ids: 0 = MMH, 1 = Jenkins (init 0 inside heaps and joins).
"""

from __future__ import annotations

from array import array

MASK64 = 0xFFFFFFFFFFFFFFFF
MASK32 = 0xFFFFFFFF

FN_MMH = 0
FN_JENKINS = 1


def mmh_update(h: int, data) -> int:
    for v in data:
        h = (h ^ (((h << 10) + (h >> 7) + v) & MASK64)) & MASK64
    return h


def mmh_hash(data) -> int:
    return mmh_update(0, data)


def _rot(x, k):
    return ((x << k) | (x >> (32 - k))) & MASK32


def _mix(a, b, c):
    a = (a - c) & MASK32; a ^= _rot(c, 4);  c = (c + b) & MASK32
    b = (b - a) & MASK32; b ^= _rot(a, 6);  a = (a + c) & MASK32
    c = (c - b) & MASK32; c ^= _rot(b, 8);  b = (b + a) & MASK32
    a = (a - c) & MASK32; a ^= _rot(c, 16); c = (c + b) & MASK32
    b = (b - a) & MASK32; b ^= _rot(a, 19); a = (a + c) & MASK32
    c = (c - b) & MASK32; c ^= _rot(b, 4);  b = (b + a) & MASK32
    return a, b, c


def _final(a, b, c):
    c ^= b; c = (c - _rot(b, 14)) & MASK32
    a ^= c; a = (a - _rot(c, 11)) & MASK32
    b ^= a; b = (b - _rot(a, 25)) & MASK32
    c ^= b; c = (c - _rot(b, 16)) & MASK32
    a ^= c; a = (a - _rot(c, 4)) & MASK32
    b ^= a; b = (b - _rot(a, 14)) & MASK32
    c ^= b; c = (c - _rot(b, 24)) & MASK32
    return c


def jenkins_hash(k, init: int = 0) -> int:
    """lookup3 ``hashlittle``, byte-at-a-time path."""
    n = len(k)
    a = b = c = (0xDEADBEEF + n + init) & MASK32
    p = 0
    while n > 12:
        a = (a + k[p] + (k[p + 1] << 8) + (k[p + 2] << 16) + (k[p + 3] << 24)) & MASK32
        b = (b + k[p + 4] + (k[p + 5] << 8) + (k[p + 6] << 16) + (k[p + 7] << 24)) & MASK32
        c = (c + k[p + 8] + (k[p + 9] << 8) + (k[p + 10] << 16) + (k[p + 11] << 24)) & MASK32
        a, b, c = _mix(a, b, c)
        n -= 12
        p += 12
    if n == 0:
        return c
    # switch fall-through, highest byte first
    if n >= 12: c += k[p + 11] << 24
    if n >= 11: c += k[p + 10] << 16
    if n >= 10: c += k[p + 9] << 8
    if n >= 9:  c += k[p + 8]
    if n >= 8:  b += k[p + 7] << 24
    if n >= 7:  b += k[p + 6] << 16
    if n >= 6:  b += k[p + 5] << 8
    if n >= 5:  b += k[p + 4]
    if n >= 4:  a += k[p + 3] << 24
    if n >= 3:  a += k[p + 2] << 16
    if n >= 2:  a += k[p + 1] << 8
    a += k[p]
    return _final(a & MASK32, b & MASK32, c & MASK32)


def hash_bytes(data, fn: int) -> int:
    if fn == FN_MMH:
        return mmh_update(0, data)
    return jenkins_hash(data, 0)


def hash_many(keys, fn: int) -> list:
    return [hash_bytes(k, fn) for k in keys]


def _link(arena, p):
    return int.from_bytes(arena[p - 8:p], "little")


def chain_find(arena, head: int, key) -> int:
    """Walk a chain from ``head``; return the payload offset of ``key`` or 0."""
    n = len(key)
    size = len(arena)
    p = head
    while p:
        if p + n < size and arena[p + n] == 0 and arena[p:p + n] == key:
            return p
        p = _link(arena, p)
    return 0


def probe(arena, buckets, fn: int, key):
    """Hash ``key``, pick its bucket and search that chain.

    Returns ``(bucket, payload offset or 0)``.
    """
    b = hash_bytes(key, fn) & (len(buckets) - 1)
    return b, chain_find(arena, buckets[b], key)


def rebuild(arena, free: int, buckets, fn: int) -> None:
    """Re-thread every entry in ``arena[:free]`` into ``buckets`` (zeroed here)."""
    mask = len(buckets) - 1
    for i in range(len(buckets)):
        buckets[i] = 0
    o = 0
    while o < free:
        p = o + 8
        end = arena.index(0, p)
        b = hash_bytes(arena[p:end], fn) & mask
        arena[o:p] = buckets[b].to_bytes(8, "little")
        buckets[b] = p
        o = (end + 1 + 7) & ~7


def chain_lengths(arena, buckets) -> list:
    out = []
    for head in buckets:
        n = 0
        p = head
        while p:
            n += 1
            p = _link(arena, p)
        out.append(n)
    return out


def join_int64(build_keys, build_tids, probe_keys, probe_tids, fn: int):
    """Chained build/probe equi-join on int64 keys.

    Keys are hashed through their 8-byte little-endian encoding. Returns two
    ``array('q')`` of matching (build tid, probe tid), in probe order with
    build tids ascending inside one probe row.
    """
    build_keys = [int(k) for k in build_keys]
    probe_keys = [int(k) for k in probe_keys]
    build_tids = [int(t) for t in build_tids]
    probe_tids = [int(t) for t in probe_tids]
    nb = 2
    while nb < 2 * len(build_keys):
        nb <<= 1
    mask = nb - 1
    heads = [-1] * nb
    nxt = [-1] * len(build_keys)
    for i in range(len(build_keys) - 1, -1, -1):
        key = build_keys[i] & MASK64
        b = hash_bytes(key.to_bytes(8, "little"), fn) & mask
        nxt[i] = heads[b]
        heads[b] = i
    out_b = array("q")
    out_p = array("q")
    for j in range(len(probe_keys)):
        key = probe_keys[j]
        i = heads[hash_bytes((key & MASK64).to_bytes(8, "little"), fn) & mask]
        while i >= 0:
            if build_keys[i] == key:
                out_b.append(build_tids[i])
                out_p.append(probe_tids[j])
            i = nxt[i]
    return out_b, out_p
