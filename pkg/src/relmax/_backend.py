"""Kernel selection: compiled extension when importable, pure Python otherwise.

Set ``RELMAX_PURE_PYTHON=1`` to force the fallback.
"""
from __future__ import annotations

import os
from types import ModuleType

from . import _kernels_py


def _load_compiled() -> ModuleType | None:
    if os.environ.get("RELMAX_PURE_PYTHON", "") not in ("", "0"):
        return None
    try:
        from . import _kernels
    except ImportError:
        return None
    return _kernels


compiled = _load_compiled()
kernels: ModuleType = compiled if compiled is not None else _kernels_py
COMPILED = compiled is not None


def available() -> dict[str, ModuleType]:
    """All importable kernel modules by name (for tests and benchmarks)."""
    out = {"python": _kernels_py}
    mod = compiled
    if mod is None:
        try:
            from . import _kernels as mod  # noqa: F811
        except ImportError:
            mod = None
    if mod is not None:
        out["cython"] = mod
    return out
