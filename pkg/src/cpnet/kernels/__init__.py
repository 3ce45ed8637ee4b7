"""Hot loops over the outcome space.

The numba backend is used when numba imports cleanly, unless the
environment variable ``CPNET_DISABLE_NUMBA`` is set to a non-empty value
other than ``0``.  ``BACKEND`` names the active one.
"""
import os

from . import _numpy

_disabled = os.environ.get("CPNET_DISABLE_NUMBA", "") not in ("", "0")

if _disabled:
    _impl = _numpy
    BACKEND = "numpy"
else:
    try:
        from . import _numba as _impl
        BACKEND = "numba"
    except ImportError:  # pragma: no cover - numba missing
        _impl = _numpy
        BACKEND = "numpy"

bfs = _impl.bfs
dominated_mask = _impl.dominated_mask
top_mask = _impl.top_mask

BACKENDS = {"numpy": _numpy}
if BACKEND == "numba":
    BACKENDS["numba"] = _impl

__all__ = ["BACKEND", "BACKENDS", "bfs", "dominated_mask", "top_mask"]
