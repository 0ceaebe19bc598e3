"""Kernel backend selection.

The compiled extension is preferred; set ``SPECGAP_PURE_PYTHON=1`` to force
the numpy fallback. ``BACKEND`` names whichever one was loaded.
"""
import os

from . import _purekernels

if os.environ.get("SPECGAP_PURE_PYTHON"):
    _impl = _purekernels
else:
    try:
        from . import _kernels as _impl
    except ImportError:
        _impl = _purekernels

BACKEND = "python" if _impl is _purekernels else "cython"

direct_dft = _impl.direct_dft
direct_convolve = _impl.direct_convolve
pair_sum_counts = _impl.pair_sum_counts
dilation_scan = _impl.dilation_scan


def backends():
    """Map backend name to module for every backend importable here."""
    found = {"python": _purekernels}
    try:
        from . import _kernels
    except ImportError:
        pass
    else:
        found["cython"] = _kernels
    return found
