"""Kernel backend selection.

Hot loops (clique enumeration, coloring search, kernel sweeps, the 8!
ordering sweep) exist twice: a numba @njit version and a pure
numpy/python fallback with identical signatures and identical iteration
order.  The environment variable E8KS_BACKEND picks one:

    auto   use numba when importable (default)
    numba  require numba, fail loudly if missing
    numpy  force the fallback even when numba is installed
"""
from __future__ import annotations

import importlib
import os
from types import ModuleType

_VALID = ("auto", "numba", "numpy")


def backend_choice() -> str:
    """Resolve E8KS_BACKEND to one of 'numba' or 'numpy'."""
    raw = os.environ.get("E8KS_BACKEND", "auto").strip().lower() or "auto"
    if raw not in _VALID:
        raise ValueError(f"E8KS_BACKEND must be one of {_VALID}, got {raw!r}")
    if raw != "auto":
        return raw
    try:
        importlib.import_module("numba")
    except ImportError:
        return "numpy"
    return "numba"


_cache: dict[str, ModuleType] = {}


def kernels(name: str | None = None) -> ModuleType:
    """Return the kernel module for the chosen backend.

    The numba module is imported lazily so that merely importing the
    package never triggers JIT compilation.
    """
    choice = name or backend_choice()
    if choice not in _cache:
        if choice == "numba":
            _cache[choice] = importlib.import_module("e8ks._kernels_numba")
        elif choice == "numpy":
            _cache[choice] = importlib.import_module("e8ks._kernels_numpy")
        else:
            raise ValueError(f"unknown backend {choice!r}")
    return _cache[choice]
