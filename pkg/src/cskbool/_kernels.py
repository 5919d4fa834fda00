"""Hot loops of the numeric layer, in two interchangeable backends.

Every kernel works on a discretized measure: support points ``x`` and
positive weights ``w`` (atoms plus quadrature nodes). The numba versions
are plain loops compiled with ``@njit``; the numpy versions vectorize the
same arithmetic. Set ``CSKBOOL_BACKEND=numpy`` before import, or call
:func:`set_backend`, to bypass numba.
"""
from __future__ import annotations

import os

import numpy as np

__all__ = ["backend", "set_backend", "available_backends", "get"]

MAX_BISECT = 400


# --- numpy backend ---------------------------------------------------------


def _np_cauchy_sum(z, x, w):
    return (w[None, :] / (z[:, None] - x[None, :])).sum(axis=1)


def _np_tilted_sums(theta, x, w):
    d = w / (1.0 - theta * x)
    return np.dot(d, x), d.sum()


def _np_bisect_mean(m, x, w, lo, hi):
    """Solve ``k(theta) = m`` for increasing k on (lo, hi)."""
    for _ in range(MAX_BISECT):
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:
            break
        s1, s0 = _np_tilted_sums(mid, x, w)
        if s1 / s0 < m:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


# --- numba backend ---------------------------------------------------------


def _build_numba():
    from numba import njit

    @njit(cache=True, nogil=True)
    def cauchy_sum(z, x, w):
        out = np.empty(z.shape[0])
        for i in range(z.shape[0]):
            acc = 0.0
            zi = z[i]
            for j in range(x.shape[0]):
                acc += w[j] / (zi - x[j])
            out[i] = acc
        return out

    @njit(cache=True, nogil=True)
    def tilted_sums(theta, x, w):
        s0 = 0.0
        s1 = 0.0
        for j in range(x.shape[0]):
            d = w[j] / (1.0 - theta * x[j])
            s0 += d
            s1 += d * x[j]
        return s1, s0

    @njit(cache=True, nogil=True)
    def bisect_mean(m, x, w, lo, hi):
        for _ in range(MAX_BISECT):
            mid = 0.5 * (lo + hi)
            if mid <= lo or mid >= hi:
                break
            s1, s0 = tilted_sums(mid, x, w)
            if s1 / s0 < m:
                lo = mid
            else:
                hi = mid
        return 0.5 * (lo + hi)

    return {"cauchy_sum": cauchy_sum, "tilted_sums": tilted_sums, "bisect_mean": bisect_mean}


_NUMPY = {
    "cauchy_sum": _np_cauchy_sum,
    "tilted_sums": _np_tilted_sums,
    "bisect_mean": _np_bisect_mean,
}
_NUMBA = None
_active = "numpy"


def available_backends() -> list[str]:
    try:
        import numba  # noqa: F401
    except ImportError:
        return ["numpy"]
    return ["numba", "numpy"]


def set_backend(name: str) -> None:
    global _NUMBA, _active
    if name not in ("numba", "numpy"):
        raise ValueError(f"unknown backend {name!r}")
    if name == "numba" and _NUMBA is None:
        _NUMBA = _build_numba()
    _active = name


def backend() -> str:
    return _active


def get(name: str):
    return (_NUMBA if _active == "numba" else _NUMPY)[name]


_requested = os.environ.get("CSKBOOL_BACKEND", "numba").lower()
if _requested == "numba" and "numba" in available_backends():
    set_backend("numba")
else:
    set_backend("numpy")
