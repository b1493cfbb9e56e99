"""Backend selection for the critical-point search kernel.

The compiled extension ``taut._core`` is used when it imports; otherwise the
numpy implementation runs.  Setting ``TAUT_KERNEL=python`` forces the fallback.
"""

from __future__ import annotations

import os

from . import _search_py

BACKEND = "python"
solve_starts = _search_py.solve_starts

if os.environ.get("TAUT_KERNEL", "").lower() != "python":
    try:
        from . import _core  # type: ignore[attr-defined]
    except ImportError:  # extension not built
        pass
    else:
        solve_starts = _core.solve_starts
        BACKEND = "cython"

__all__ = ["BACKEND", "solve_starts"]
