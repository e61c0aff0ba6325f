"""Rigorous genus bounds for curves over finite fields with restricted Frobenius angles."""

from __future__ import annotations

from .errors import GenusBoundError
from .kernels import BACKEND

__version__ = "0.1.0"

__all__ = ["GenusBoundError", "BACKEND", "__version__"]
