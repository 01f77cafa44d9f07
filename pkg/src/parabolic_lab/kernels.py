"""Kernel backend selection.

The compiled module is used when it was built; setting PARABOLIC_LAB_PURE=1
forces the numpy fallback.
"""
import os

from . import _pykernels

BACKEND = "python"
_impl = _pykernels
if os.environ.get("PARABOLIC_LAB_PURE", "") not in ("1", "true", "yes"):
    try:
        from . import _ckernels as _impl  # noqa: F811
        BACKEND = "cython"
    except ImportError:
        _impl = _pykernels

shell_accumulate = _impl.shell_accumulate
cone_reduce = _impl.cone_reduce
