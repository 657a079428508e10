"""Kernel selection: compiled extension when available, pure Python otherwise.

`backend()` reports which twin is active; both expose
`count_points_mod_p` and `ap_sweep` with identical semantics.
"""

from __future__ import annotations

import os

from . import _kernels_py

if os.environ.get("HASSEWEIL_PURE_PYTHON"):
    _impl = _kernels_py
else:
    try:
        from . import _kernels as _impl  # type: ignore[no-redef]
    except ImportError:
        _impl = _kernels_py

count_points_mod_p = _impl.count_points_mod_p
ap_sweep = _impl.ap_sweep
ap_bsgs = _impl.ap_bsgs


def backend() -> str:
    """Name of the active kernel implementation ("cython" or "python")."""
    return _impl.IMPLEMENTATION
