"""Permutation kernel selection: compiled extension if available, else pure Python.

Set HCOV_PURE=1 to force the pure backend (used by the benchmark and for
debugging kernel discrepancies).
"""

import os

if os.environ.get("HCOV_PURE"):
    from hcov import _pure as _impl
else:
    try:
        from hcov import _speedups as _impl  # type: ignore[attr-defined]
    except ImportError:
        from hcov import _pure as _impl

BACKEND = _impl.BACKEND
perm_id = _impl.perm_id
perm_mul = _impl.perm_mul
perm_inv = _impl.perm_inv
perm_pow = _impl.perm_pow
perm_order = _impl.perm_order
mulclose = _impl.mulclose
