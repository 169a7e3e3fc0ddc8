"""Float kernels for the hot inner loops (Horner evaluation, bisection).

A compiled Cython extension is preferred; a numpy implementation with the
same surface is the fallback. Set ``REEBSYS_PURE_PY=1`` to force the
fallback (used by the benchmark and the backend-agreement tests).
"""

import os

from . import _numpy as _py_backend

if os.environ.get("REEBSYS_PURE_PY") == "1":
    _backend = _py_backend
else:
    try:
        from . import _cext as _backend  # type: ignore[no-redef]
    except ImportError:
        _backend = _py_backend

BACKEND = getattr(_backend, "BACKEND_NAME", "python")

polyval = _backend.polyval
polyval_grid = _backend.polyval_grid
bisect_root = _backend.bisect_root
grid_min = _backend.grid_min

__all__ = ["BACKEND", "polyval", "polyval_grid", "bisect_root", "grid_min"]
