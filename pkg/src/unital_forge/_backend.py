"""Kernel backend selection.

Heavy loops run on numba-jitted kernels when available, with vectorized
numpy fallbacks.  The UNITAL_FORGE_BACKEND environment variable (or an
explicit argument) picks one of "numba" or "numpy"; default is numba
when importable, else numpy.
"""
from __future__ import annotations

import os

from .errors import InvalidParameters

ENV_FLAG = "UNITAL_FORGE_BACKEND"

_HAVE_NUMBA = None


def have_numba() -> bool:
    global _HAVE_NUMBA
    if _HAVE_NUMBA is None:
        try:
            import numba  # noqa: F401
            _HAVE_NUMBA = True
        except ImportError:
            _HAVE_NUMBA = False
    return _HAVE_NUMBA


def select_backend(requested: str | None = None) -> str:
    req = requested if requested is not None else os.environ.get(ENV_FLAG)
    if req is None:
        return "numba" if have_numba() else "numpy"
    req = req.lower()
    if req not in ("numba", "numpy"):
        raise InvalidParameters(f"unknown backend {req!r}; use numba or numpy")
    if req == "numba" and not have_numba():
        raise InvalidParameters("numba backend requested but numba is unavailable")
    return req
