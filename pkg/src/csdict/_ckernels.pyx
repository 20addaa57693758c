# cython: boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled hot kernels; mirrors ``_pykernels`` function for function."""

from array import array

from libc.stdint cimport int64_t, uint32_t, uint64_t
from libc.stdlib cimport free, malloc
from libc.string cimport memcmp

FN_MMH = 0
FN_JENKINS = 1


cdef inline uint64_t _mmh(uint64_t h, const unsigned char* p, Py_ssize_t n) noexcept nogil:
    cdef Py_ssize_t i
    for i in range(n):
        h ^= (h << 10) + (h >> 7) + p[i]
    return h


cdef inline uint32_t _rot(uint32_t x, int k) noexcept nogil:
    return (x << k) | (x >> (32 - k))


cdef uint32_t _jenkins(const unsigned char* k, Py_ssize_t length, uint32_t init) noexcept nogil:
    cdef uint32_t a, b, c
    a = b = c = <uint32_t>0xdeadbeef + <uint32_t>length + init
    while length > 12:
        a += k[0] + (<uint32_t>k[1] << 8) + (<uint32_t>k[2] << 16) + (<uint32_t>k[3] << 24)
        b += k[4] + (<uint32_t>k[5] << 8) + (<uint32_t>k[6] << 16) + (<uint32_t>k[7] << 24)
        c += k[8] + (<uint32_t>k[9] << 8) + (<uint32_t>k[10] << 16) + (<uint32_t>k[11] << 24)
        a -= c; a ^= _rot(c, 4);  c += b
        b -= a; b ^= _rot(a, 6);  a += c
        c -= b; c ^= _rot(b, 8);  b += a
        a -= c; a ^= _rot(c, 16); c += b
        b -= a; b ^= _rot(a, 19); a += c
        c -= b; c ^= _rot(b, 4);  b += a
        length -= 12
        k += 12
    if length == 0:
        return c
    if length >= 12: c += <uint32_t>k[11] << 24
    if length >= 11: c += <uint32_t>k[10] << 16
    if length >= 10: c += <uint32_t>k[9] << 8
    if length >= 9:  c += k[8]
    if length >= 8:  b += <uint32_t>k[7] << 24
    if length >= 7:  b += <uint32_t>k[6] << 16
    if length >= 6:  b += <uint32_t>k[5] << 8
    if length >= 5:  b += k[4]
    if length >= 4:  a += <uint32_t>k[3] << 24
    if length >= 3:  a += <uint32_t>k[2] << 16
    if length >= 2:  a += <uint32_t>k[1] << 8
    a += k[0]
    c ^= b; c -= _rot(b, 14)
    a ^= c; a -= _rot(c, 11)
    b ^= a; b -= _rot(a, 25)
    c ^= b; c -= _rot(b, 16)
    a ^= c; a -= _rot(c, 4)
    b ^= a; b -= _rot(a, 14)
    c ^= b; c -= _rot(b, 24)
    return c


cdef inline uint64_t _hash(const unsigned char* p, Py_ssize_t n, int fn) noexcept nogil:
    if fn == 0:
        return _mmh(0, p, n)
    return _jenkins(p, n, 0)


cdef inline uint64_t _link(const unsigned char* arena, uint64_t p) noexcept nogil:
    cdef const unsigned char* q = arena + p - 8
    return (<uint64_t>q[0] | (<uint64_t>q[1] << 8) | (<uint64_t>q[2] << 16) | (<uint64_t>q[3] << 24)
            | (<uint64_t>q[4] << 32) | (<uint64_t>q[5] << 40) | (<uint64_t>q[6] << 48) | (<uint64_t>q[7] << 56))


cdef inline void _set_link(unsigned char* arena, uint64_t o, uint64_t v) noexcept nogil:
    cdef int i
    for i in range(8):
        arena[o + i] = (v >> (8 * i)) & 0xff


cdef inline uint64_t _find(const unsigned char* arena, uint64_t size, uint64_t head,
                           const unsigned char* key, Py_ssize_t n) noexcept nogil:
    cdef uint64_t p = head
    while p != 0:
        if p + n < size and arena[p + n] == 0 and (n == 0 or memcmp(arena + p, key, n) == 0):
            return p
        p = _link(arena, p)
    return 0


def mmh_update(uint64_t h, const unsigned char[::1] data):
    if data.shape[0] == 0:
        return h
    return _mmh(h, &data[0], data.shape[0])


def mmh_hash(const unsigned char[::1] data):
    if data.shape[0] == 0:
        return 0
    return _mmh(0, &data[0], data.shape[0])


def jenkins_hash(const unsigned char[::1] k, uint32_t init=0):
    cdef const unsigned char* p = NULL
    if k.shape[0]:
        p = &k[0]
    return _jenkins(p, k.shape[0], init)


def hash_bytes(const unsigned char[::1] data, int fn):
    cdef const unsigned char* p = NULL
    if data.shape[0]:
        p = &data[0]
    return _hash(p, data.shape[0], fn)


def hash_many(keys, int fn):
    cdef bytes k
    return [_hash(<const unsigned char*>k, len(k), fn) for k in keys]


def chain_find(const unsigned char[::1] arena, uint64_t head, const unsigned char[::1] key):
    cdef const unsigned char* kp = NULL
    if key.shape[0]:
        kp = &key[0]
    return _find(&arena[0], arena.shape[0], head, kp, key.shape[0])


def probe(const unsigned char[::1] arena, const uint64_t[::1] buckets, int fn,
          const unsigned char[::1] key):
    cdef const unsigned char* kp = NULL
    cdef Py_ssize_t n = key.shape[0]
    if n:
        kp = &key[0]
    cdef uint64_t b = _hash(kp, n, fn) & <uint64_t>(buckets.shape[0] - 1)
    return b, _find(&arena[0], arena.shape[0], buckets[b], kp, n)


def rebuild(unsigned char[::1] arena, uint64_t free, uint64_t[::1] buckets, int fn):
    cdef uint64_t mask = buckets.shape[0] - 1
    cdef uint64_t o = 0, p, end, b
    cdef Py_ssize_t i
    for i in range(buckets.shape[0]):
        buckets[i] = 0
    while o < free:
        p = o + 8
        end = p
        while arena[end] != 0:
            end += 1
        b = _hash(&arena[p], end - p, fn) & mask
        _set_link(&arena[0], o, buckets[b])
        buckets[b] = p
        o = (end + 1 + 7) & ~(<uint64_t>7)


def chain_lengths(const unsigned char[::1] arena, const uint64_t[::1] buckets):
    cdef Py_ssize_t i
    cdef uint64_t p
    cdef long n
    out = []
    for i in range(buckets.shape[0]):
        n = 0
        p = buckets[i]
        while p != 0:
            n += 1
            p = _link(&arena[0], p)
        out.append(n)
    return out


cdef inline uint64_t _hash_i64(int64_t key, int fn) noexcept nogil:
    cdef unsigned char buf[8]
    cdef uint64_t u = <uint64_t>key
    cdef int i
    for i in range(8):
        buf[i] = (u >> (8 * i)) & 0xff
    return _hash(buf, 8, fn)


def join_int64(const int64_t[::1] build_keys, const int64_t[::1] build_tids,
               const int64_t[::1] probe_keys, const int64_t[::1] probe_tids, int fn):
    cdef Py_ssize_t nbuild = build_keys.shape[0]
    cdef Py_ssize_t nb = 2
    while nb < 2 * nbuild:
        nb <<= 1
    cdef uint64_t mask = nb - 1
    cdef Py_ssize_t* heads = <Py_ssize_t*>malloc(nb * sizeof(Py_ssize_t))
    cdef Py_ssize_t* nxt = <Py_ssize_t*>malloc((nbuild + 1) * sizeof(Py_ssize_t))
    if heads == NULL or nxt == NULL:
        free(heads)
        free(nxt)
        raise MemoryError()
    cdef Py_ssize_t i, j
    cdef uint64_t b
    cdef int64_t key
    out_b = array("q")
    out_p = array("q")
    try:
        for i in range(nb):
            heads[i] = -1
        for i in range(nbuild - 1, -1, -1):
            b = _hash_i64(build_keys[i], fn) & mask
            nxt[i] = heads[b]
            heads[b] = i
        for j in range(probe_keys.shape[0]):
            key = probe_keys[j]
            i = heads[_hash_i64(key, fn) & mask]
            while i >= 0:
                if build_keys[i] == key:
                    out_b.append(build_tids[i])
                    out_p.append(probe_tids[j])
                i = nxt[i]
    finally:
        free(heads)
        free(nxt)
    return out_b, out_p
