"""Kernel selection.

The compiled extension is used when it imports and ``OSCULANT_PURE_PYTHON``
is unset (or "0"); otherwise the numpy fallback is used. ``BACKEND`` names the
active choice.
"""

import os

from . import _pykernels

if os.environ.get("OSCULANT_PURE_PYTHON", "0") not in ("", "0"):
    _impl = _pykernels
else:
    try:
        from . import _kernels as _impl
    except ImportError:
        _impl = _pykernels

BACKEND = "cython" if _impl is not _pykernels else "python"

series_mul = _impl.series_mul
series_div = _impl.series_div
series_exp = _impl.series_exp
series_log = _impl.series_log
series_sincos = _impl.series_sincos
series_sqrt = _impl.series_sqrt
ms_segments = _impl.ms_segments


def kernels(name):
    """Return the kernel namespace ``"cython"`` or ``"python"`` explicitly."""
    if name == "python":
        return _pykernels
    if name == "cython":
        from . import _kernels
        return _kernels
    raise ValueError(f"unknown backend {name!r}")
