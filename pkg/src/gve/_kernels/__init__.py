"""Integer kernels for graded-map checks.

The compiled extension is used when it was built and importable; otherwise the
pure-Python implementation is selected.  Set ``GVE_PURE_PYTHON=1`` to force
the fallback.
"""
from __future__ import annotations

import os

from . import _pure

BACKEND = "python"
_impl = _pure

if os.environ.get("GVE_PURE_PYTHON", "") not in ("1", "true", "yes"):
    try:
        from . import _ckernels as _impl  # type: ignore[no-redef]

        BACKEND = "cython"
    except ImportError:
        _impl = _pure

superadditivity_violation = _impl.superadditivity_violation
negation_violation = _impl.negation_violation
enumerate_tables = _impl.enumerate_tables

__all__ = ["BACKEND", "superadditivity_violation", "negation_violation", "enumerate_tables", "_pure"]
