"""Least-squares slope fits in log-log coordinates."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import InputError

MIN_POINTS = 4


@dataclass(frozen=True)
class SlopeFit:
    slope: float
    intercept: float
    max_residual: float
    points: tuple[tuple[float, float], ...]


def fit_line(x: Sequence[float], y: Sequence[float], min_points: int = MIN_POINTS) -> SlopeFit:
    """Ordinary least squares y = slope * x + intercept."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if x.shape != y.shape or x.ndim != 1:
        raise InputError("abscissae and ordinates must be equal-length sequences")
    if x.size < min_points:
        raise InputError(f"need at least {min_points} points, got {x.size}")
    if not (np.all(np.isfinite(x)) and np.all(np.isfinite(y))):
        raise InputError("fit points must be finite")
    slope, intercept = np.polyfit(x, y, 1)
    resid = y - (slope * x + intercept)
    return SlopeFit(float(slope), float(intercept), float(np.max(np.abs(resid))),
                    tuple(zip(x.tolist(), y.tolist())))


def fit_loglog(x: Sequence[float], y: Sequence[float], min_points: int = MIN_POINTS) -> SlopeFit:
    """Fit log y against log x; all values must be positive."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if np.any(x <= 0) or np.any(y <= 0):
        raise InputError("log-log fit needs positive values")
    return fit_line(np.log(x), np.log(y), min_points)
