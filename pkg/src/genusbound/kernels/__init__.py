"""Hot loops with a compiled implementation and a pure-Python fallback.

The compiled extension is used when it was built; otherwise the pure-Python
versions in :mod:`._pykernels` are used.  ``BACKEND`` names the active one.
"""

from __future__ import annotations

from . import _pykernels as python

try:
    from . import _ckernels as compiled
except ImportError:  # extension not built
    compiled = None

BACKEND = "compiled" if compiled is not None else "python"

# int64 headroom for the compiled enumeration (products of three factors)
_INT64_SAFE = 1 << 62


def _impl(backend: str | None):
    if backend is None:
        backend = BACKEND
    if backend == "compiled":
        if compiled is None:
            raise RuntimeError("compiled kernels are not available")
        return compiled
    if backend == "python":
        return python
    raise ValueError(f"unknown backend {backend!r}")


def _fits_int64(rows, rhs, dims, g) -> bool:
    from math import lcm
    L = lcm(*dims) if dims else 1
    big = max([abs(x) for r in rows for x in r] + [abs(b) for b in rhs] + [1])
    return big * L * (g + 1) * (len(dims) + 1) < _INT64_SAFE


def enumerate_fixed_sum(rows, rhs, dims, g, first=None, backend=None):
    impl = _impl(backend)
    if impl is compiled and not _fits_int64(rows, rhs, dims, g):
        if backend == "compiled":
            raise OverflowError("system too large for the compiled kernel")
        impl = python
    return impl.enumerate_fixed_sum(rows, rhs, dims, g, first)


def weierstrass_traces(q, p, add, mul, backend=None):
    return _impl(backend).weierstrass_traces(q, p, add, mul)
