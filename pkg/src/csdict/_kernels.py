"""Pick the compiled kernels when available, else the pure-Python ones.

Set ``CSDICT_PURE=1`` to force the fallback.
"""

import os

if os.environ.get("CSDICT_PURE"):
    from csdict import _pykernels as impl
else:
    try:
        from csdict import _ckernels as impl
    except ImportError:
        from csdict import _pykernels as impl

BACKEND = "cython" if impl.__name__.endswith("_ckernels") else "python"

mmh_hash = impl.mmh_hash
mmh_update = impl.mmh_update
jenkins_hash = impl.jenkins_hash
hash_bytes = impl.hash_bytes
hash_many = impl.hash_many
chain_find = impl.chain_find
probe = impl.probe
rebuild = impl.rebuild
chain_lengths = impl.chain_lengths
join_int64 = impl.join_int64
