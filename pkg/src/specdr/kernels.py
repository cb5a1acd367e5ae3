"""Kernel selection.

The compiled extension is used when it was built and imports cleanly; the
numpy fallback is used otherwise, or whenever ``SPECDR_PURE_PYTHON`` is set
to a non-empty value other than ``0``.
"""
import os

from . import _kernels_py

_force_py = os.environ.get("SPECDR_PURE_PYTHON", "") not in ("", "0")

compiled = None
if not _force_py:
    try:
        from . import _ckernels as compiled
    except ImportError:
        compiled = None

active = compiled if compiled is not None else _kernels_py
BACKEND = active.NAME

gaussian_fill = active.gaussian_fill
pairwise_sq_dists = active.pairwise_sq_dists
double_center_sq = active.double_center_sq
splitmix64 = active.splitmix64
