"""Kernel backend selection.

The compiled Cython kernels are preferred; the NumPy implementation is a
drop-in replacement.  Set QSIM_KERNELS=python or QSIM_KERNELS=cython to
force a backend (cython raises if the extension is missing).
"""

import os

_requested = os.environ.get("QSIM_KERNELS", "auto").lower()

if _requested not in ("auto", "cython", "python"):
    raise ValueError(f"QSIM_KERNELS must be auto, cython or python, got {_requested!r}")

if _requested == "python":
    from . import _kernels_py as _impl

    backend = "python"
else:
    try:
        from . import _kernels_cy as _impl

        backend = "cython"
    except ImportError:
        if _requested == "cython":
            raise
        from . import _kernels_py as _impl

        backend = "python"

apply_ctrl_1q = _impl.apply_ctrl_1q
apply_cswap_pair = _impl.apply_cswap_pair
