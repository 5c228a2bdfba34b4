"""Kernel selection: the compiled extension when importable, else pure Python.

Set ``QSTACK_PURE=1`` to force the pure-Python implementations.
"""
from __future__ import annotations

import os

from . import _pykernels as pure

compiled = None
if os.environ.get("QSTACK_PURE", "") not in ("1", "true", "yes"):
    try:
        from . import _kernels as compiled  # type: ignore[no-redef]
    except ImportError:  # pragma: no cover - depends on the build
        compiled = None

active = compiled if compiled is not None else pure
BACKEND = active.BACKEND

matmul_mod = active.matmul_mod
count_solutions = active.count_solutions
coherence_sweep = active.coherence_sweep
