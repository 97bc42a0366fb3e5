"""Hot integer kernels with a numba path and a pure-numpy fallback.

Set ``ABELTORIC_DISABLE_NUMBA=1`` to force the numpy path.  Individual calls
can also pass ``backend="numba"`` or ``backend="numpy"``.

Dense series layout: an int64 array of shape ``(s_cut + 1, 2 * w + 1, 2)``;
entry ``[s, w + t, :]`` holds the Eisenstein coefficient (x, y) = x + y*omega
of s^s t^t.  All kernels are exact as long as nothing overflows int64; the
callers in :mod:`abeltoric.theta` check a bound before dispatching here.
"""
from __future__ import annotations

import logging
import os

import numpy as np

log = logging.getLogger(__name__)

try:
    if os.environ.get("ABELTORIC_DISABLE_NUMBA", "").strip() not in ("", "0"):
        raise ImportError("disabled by ABELTORIC_DISABLE_NUMBA")
    from numba import njit

    HAVE_NUMBA = True
except ImportError as exc:  # pragma: no cover - depends on environment
    log.debug("numba unavailable: %s", exc)
    HAVE_NUMBA = False

DEFAULT_BACKEND = "numba" if HAVE_NUMBA else "numpy"
BACKENDS = ("numba", "numpy")


def resolve(backend: str | None) -> str:
    backend = backend or DEFAULT_BACKEND
    if backend not in BACKENDS:
        raise ValueError(f"unknown backend {backend!r}")
    if backend == "numba" and not HAVE_NUMBA:
        raise RuntimeError("numba backend requested but numba is unavailable or disabled")
    return backend


# -- divisibility grid -------------------------------------------------------

def _divisibility_grid_numpy(nu_max, kappa_max):
    nu = np.arange(1, nu_max + 1, dtype=np.int64)[:, None]
    kappa = np.arange(0, kappa_max + 1, dtype=np.int64)[None, :]
    num = -kappa * (nu * nu + 3 * nu) + 8 * nu + 24
    return num % (2 * nu) == 0


def _divisibility_grid_py(nu_max, kappa_max, out):
    for i in range(nu_max):
        nu = i + 1
        for kappa in range(kappa_max + 1):
            num = -kappa * (nu * nu + 3 * nu) + 8 * nu + 24
            out[i, kappa] = num % (2 * nu) == 0
    return out


# -- truncated series product over Z[omega] ----------------------------------

def _series_mul_py(a, b, out):
    n_s, n_t = a.shape[0], a.shape[1]
    w = (n_t - 1) // 2
    for s1 in range(n_s):
        for s2 in range(n_s - s1):
            s = s1 + s2
            for t1 in range(n_t):
                x1 = a[s1, t1, 0]
                y1 = a[s1, t1, 1]
                if x1 == 0 and y1 == 0:
                    continue
                lo = max(0, w - t1)
                hi = min(n_t, n_t + w - t1)
                for t2 in range(lo, hi):
                    x2 = b[s2, t2, 0]
                    y2 = b[s2, t2, 1]
                    if x2 == 0 and y2 == 0:
                        continue
                    t = t1 + t2 - w
                    yy = y1 * y2
                    out[s, t, 0] += x1 * x2 - yy
                    out[s, t, 1] += x1 * y2 + x2 * y1 - yy
    return out


def _series_mul_numpy(a, b):
    n_s, n_t = a.shape[0], a.shape[1]
    w = (n_t - 1) // 2
    out = np.zeros_like(a)
    for s1 in range(n_s):
        x1, y1 = a[s1, :, 0], a[s1, :, 1]
        if not (x1.any() or y1.any()):
            continue
        for s2 in range(n_s - s1):
            x2, y2 = b[s2, :, 0], b[s2, :, 1]
            if not (x2.any() or y2.any()):
                continue
            yy = np.convolve(y1, y2)[w:w + n_t]
            out[s1 + s2, :, 0] += np.convolve(x1, x2)[w:w + n_t] - yy
            out[s1 + s2, :, 1] += (np.convolve(x1, y2) + np.convolve(y1, x2))[w:w + n_t] - yy
    return out


if HAVE_NUMBA:
    _series_mul_jit = njit(cache=True)(_series_mul_py)
    _divisibility_grid_jit = njit(cache=True)(_divisibility_grid_py)


def series_mul(a: np.ndarray, b: np.ndarray, backend: str | None = None) -> np.ndarray:
    """Product of two dense truncated series; exponents outside the window are dropped."""
    if a.shape != b.shape:
        raise ValueError("series shapes differ")
    if resolve(backend) == "numba":
        return _series_mul_jit(np.ascontiguousarray(a), np.ascontiguousarray(b), np.zeros_like(a))
    return _series_mul_numpy(a, b)


def divisibility_grid(nu_max: int, kappa_max: int, backend: str | None = None) -> np.ndarray:
    """grid[nu-1, kappa] is True iff 2nu divides -kappa(nu^2+3nu) + 8nu + 24."""
    if resolve(backend) == "numba":
        out = np.zeros((nu_max, kappa_max + 1), dtype=np.bool_)
        return _divisibility_grid_jit(nu_max, kappa_max, out)
    return _divisibility_grid_numpy(nu_max, kappa_max)


def l1_norm(a: np.ndarray) -> int:
    return int(np.abs(a).sum(dtype=np.int64))
