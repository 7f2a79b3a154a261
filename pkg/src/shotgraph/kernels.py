"""Kernel backend selection.

Imports the compiled extension when present, otherwise falls back to the
pure-Python implementation. Set SHOTGRAPH_PURE_PYTHON=1 to force the
fallback (used by the benchmark and for debugging).
"""

from __future__ import annotations

import os

if os.environ.get("SHOTGRAPH_PURE_PYTHON"):
    from shotgraph import _kernels_py as _impl
else:
    try:
        from shotgraph import _kernels as _impl  # type: ignore[no-redef]
    except ImportError:
        from shotgraph import _kernels_py as _impl  # type: ignore[no-redef]

similarity_fill = _impl.similarity_fill


def backend() -> str:
    """Name of the active kernel backend: "cython" or "python"."""
    return _impl.BACKEND
