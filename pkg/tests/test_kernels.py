"""The compiled and pure-Python kernels must agree call for call."""

import random
from array import array

import numpy as np
import pytest

from csdict import _kernels, _pykernels

ck = pytest.importorskip("csdict._ckernels")


def test_backend_reported():
    assert _kernels.BACKEND in ("cython", "python")


def test_hash_parity():
    rng = random.Random(1)
    for _ in range(2000):
        k = rng.randbytes(rng.randint(0, 70))
        init = rng.getrandbits(32)
        assert ck.mmh_hash(k) == _pykernels.mmh_hash(k)
        assert ck.jenkins_hash(k, init) == _pykernels.jenkins_hash(k, init)
        h = rng.getrandbits(64)
        assert ck.mmh_update(h, k) == _pykernels.mmh_update(h, k)
        for fn in (0, 1):
            assert ck.hash_bytes(k, fn) == _pykernels.hash_bytes(k, fn)


def test_hash_many_parity():
    keys = [bytes([i]) * i for i in range(50)]
    for fn in (0, 1):
        assert ck.hash_many(keys, fn) == _pykernels.hash_many(keys, fn)


def _heap(mod, strings, nb, fn):
    arena = bytearray(4096)
    buckets = array("Q", bytes(8 * nb))
    o = 0
    for s in strings:
        b, p = mod.probe(arena, buckets, fn, s)
        if p:
            continue
        arena[o:o + 8] = buckets[b].to_bytes(8, "little")
        arena[o + 8:o + 8 + len(s)] = s
        buckets[b] = o + 8
        o = (o + 8 + len(s) + 1 + 7) & ~7
    return arena, buckets, o


@pytest.mark.parametrize("fn", [0, 1])
def test_heap_kernel_parity(fn):
    rng = random.Random(fn)
    strings = [rng.randbytes(rng.randint(0, 12)).replace(b"\0", b"z") for _ in range(150)]
    a1, b1, f1 = _heap(ck, strings, 16, fn)
    a2, b2, f2 = _heap(_pykernels, strings, 16, fn)
    assert (a1, b1, f1) == (a2, b2, f2)
    assert ck.chain_lengths(a1, b1) == _pykernels.chain_lengths(a2, b2)
    big1, big2 = array("Q", bytes(8 * 64)), array("Q", bytes(8 * 64))
    ck.rebuild(a1, f1, big1, fn)
    _pykernels.rebuild(a2, f2, big2, fn)
    assert (a1, big1) == (a2, big2)
    for s in strings + [b"never stored", b"x" * 5000]:
        assert ck.probe(a1, big1, fn, s) == _pykernels.probe(a2, big2, fn, s)


def test_chain_find_key_longer_than_arena_tail():
    arena, buckets, _ = _heap(ck, [b"ab"], 2, 0)
    head = max(buckets)
    assert ck.chain_find(arena, head, b"ab" + b"c" * 10000) == 0
    assert _pykernels.chain_find(arena, head, b"ab" + b"c" * 10000) == 0


@pytest.mark.parametrize("fn", [0, 1])
def test_join_parity(fn):
    rng = np.random.default_rng(fn)
    bk = rng.integers(-5, 30, 200).astype(np.int64)
    pk = rng.integers(-5, 30, 300).astype(np.int64)
    bt = np.arange(200, dtype=np.int64)
    pt = np.arange(300, dtype=np.int64) + 1000
    assert ck.join_int64(bk, bt, pk, pt, fn) == _pykernels.join_int64(bk, bt, pk, pt, fn)


def test_join_empty_build():
    e = np.empty(0, dtype=np.int64)
    p = np.arange(3, dtype=np.int64)
    assert list(ck.join_int64(e, e, p, p, 0)[0]) == []
    assert list(_pykernels.join_int64(e, e, p, p, 0)[0]) == []
