"""Fourier symbol of the fractional wave Green's function."""

from __future__ import annotations

import numpy as np

_SERIES_SWITCH = 1e-4


def green_hat(t, xi, kappa: float):
    """sin(t|xi|^(kappa/2)) / |xi|^(kappa/2), with value t at xi = 0.

    Vectorized over ``t`` and ``xi``. For ``t*x < 1e-4`` a short Taylor series
    is used to keep relative accuracy near the removable singularity.
    """
    t = np.asarray(t, dtype=float)
    x = np.abs(np.asarray(xi, dtype=float)) ** (kappa / 2)
    tx = t * x
    small = tx < _SERIES_SWITCH
    with np.errstate(divide="ignore", invalid="ignore"):
        direct = np.sin(tx) / x
    series = t * (1 - tx * tx / 6 + tx**4 / 120)
    out = np.where(small, series, direct)
    return out if out.ndim else float(out)


def y_minus_sin(y: np.ndarray) -> np.ndarray:
    """y - sin(y) without cancellation for small y."""
    y = np.asarray(y, dtype=float)
    out = y - np.sin(y)
    small = np.abs(y) < 0.5
    ys = y[small]
    y2 = ys * ys
    # Taylor series; terms beyond y^15 are below 1e-17 relative at y = 0.5
    acc = np.zeros_like(ys)
    term = ys * y2 / 6
    for j in range(1, 8):
        acc += term
        term = -term * y2 / ((2 * j + 2) * (2 * j + 3))
    out[small] = acc
    return out


def green_wave_1d(t, x):
    """Real-space kernel for kappa = 2: one half inside the light cone."""
    out = np.where(np.abs(np.asarray(x, dtype=float)) < np.asarray(t, dtype=float), 0.5, 0.0)
    return out if out.ndim else float(out)
