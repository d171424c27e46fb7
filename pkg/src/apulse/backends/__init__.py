"""Search-kernel backends.

The hot inner loops (Dijkstra passes and the label-setting searches) exist
twice: numba-compiled kernels in :mod:`nb_kernels` and a pure Python/numpy
fallback in :mod:`py_kernels`. Both implement identical semantics, including
tie-breaking and float operation order, so results are bit-identical.

The active backend is selected by the APULSE_BACKEND environment variable
("numba" or "python"). It defaults to numba when importable, and individual
call sites may override per call.
"""

from __future__ import annotations

import os

# counter slots shared by every search kernel
C_PUSHED = 0
C_POPPED = 1
C_PR_FEAS = 2
C_PR_OPT = 3
C_PR_DOM = 4
C_GOAL = 5
C_EXPANDED = 6
C_MONOTONE = 7
C_STATUS = 8
C_FRONTIER = 9
C_RESIDUE = 10
N_COUNTERS = 11

STATUS_EXHAUSTED = 0
STATUS_EARLY_EXIT = 1
STATUS_LIMIT = 2

_MODULES: dict[str, object] = {}


def _numba_usable() -> bool:
    try:
        import numba  # noqa: F401
    except Exception:
        return False
    return True


def resolve_backend(name: str | None = None) -> str:
    """Map an explicit name or the APULSE_BACKEND env var to a backend id."""
    if name is None:
        env = os.environ.get("APULSE_BACKEND", "").strip().lower()
        name = env or None
    if name is None:
        return "numba" if _numba_usable() else "python"
    if name not in ("numba", "python"):
        raise ValueError(f"unknown backend {name!r}, expected 'numba' or 'python'")
    return name


def get_kernels(name: str | None = None):
    """Return the kernel module for the requested (or default) backend."""
    name = resolve_backend(name)
    mod = _MODULES.get(name)
    if mod is None:
        if name == "python":
            from . import py_kernels as mod
        else:
            from . import nb_kernels as mod
        _MODULES[name] = mod
    return mod
