"""Backend selection for the enumeration kernels.

The compiled extension is used when it was built; otherwise the pure-Python
module is used.  Setting ``THETA_BORCHERDS_PURE=1`` forces the fallback.
"""

import os

from . import _pykernels

if os.environ.get("THETA_BORCHERDS_PURE", "") not in ("", "0"):
    _impl = _pykernels
else:
    try:
        from . import _ckernels as _impl
    except ImportError:  # extension not built
        _impl = _pykernels

BACKEND = "python" if _impl is _pykernels else "cython"

norm_histogram = _impl.norm_histogram
short_vectors = _impl.short_vectors
exponent_tables = _impl.exponent_tables

__all__ = ["BACKEND", "norm_histogram", "short_vectors", "exponent_tables"]
