"""Selects the compiled enumeration kernels, falling back to pure Python.

Set ``ANTICHECKERS_PURE_PYTHON=1`` to force the fallback.
"""

from __future__ import annotations

import logging
import os

LOGGER = logging.getLogger(__name__)

try:
    if os.environ.get("ANTICHECKERS_PURE_PYTHON"):
        raise ImportError("pure Python requested")
    from . import _ckernels as _impl

    BACKEND = "cython"
except ImportError as exc:  # pragma: no cover - depends on the build
    LOGGER.debug("using pure-Python kernels: %s", exc)
    from . import _pykernels as _impl

    BACKEND = "python"

path_turn_histogram = _impl.path_turn_histogram
balanced_subsets = _impl.balanced_subsets
overlap_histogram = _impl.overlap_histogram

__all__ = ["BACKEND", "path_turn_histogram", "balanced_subsets", "overlap_histogram"]
