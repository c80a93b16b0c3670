"""Kernel selection: compiled when available, pure Python otherwise.

Set ``ORIENTHAM_PURE_PYTHON=1`` to force the pure-Python kernel.
"""
from __future__ import annotations

import os

from . import _pykernel

try:
    if os.environ.get("ORIENTHAM_PURE_PYTHON"):
        raise ImportError("pure Python requested")
    from . import _ckernel
except ImportError:
    _ckernel = None

BACKEND = "cython" if _ckernel is not None else "python"
MAX_COMPILED_VERTICES = 64


def get_kernel(name: str | None = None, n: int = 0):
    """Kernel module by name, or the default one able to handle ``n`` vertices."""
    if name == "python":
        return _pykernel
    if name == "cython":
        if _ckernel is None:
            raise ImportError("compiled kernel is not built")
        return _ckernel
    if name is not None:
        raise ValueError(f"unknown kernel {name!r}")
    if _ckernel is not None and n <= MAX_COMPILED_VERTICES:
        return _ckernel
    return _pykernel


def available() -> list[str]:
    return ["python"] + (["cython"] if _ckernel is not None else [])
