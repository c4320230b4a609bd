"""Fourier transform in space of the chaos kernels."""

from __future__ import annotations

import math

import numpy as np

from ..errors import PreconditionError
from ..greens import green_hat


def chaos_kernel_hat(n: int, s, xi, t: float, x: float, kappa: float,
                     sort: bool = False) -> complex:
    """Spatial Fourier transform of the n-th chaos kernel at times ``s``.

    With ``sort=True`` the pairs (s_j, xi_j) are first ordered by time, which
    gives the symmetrized kernel.
    """
    s = np.asarray(s, dtype=float)
    xi = np.asarray(xi, dtype=float)
    if s.shape != (n,) or xi.shape != (n,):
        raise PreconditionError(f"expected {n} times and {n} frequencies")
    if sort:
        order = np.argsort(s, kind="stable")
        s, xi = s[order], xi[order]
    if not (0 < s[0] and np.all(np.diff(s) > 0) and s[-1] < t):
        raise PreconditionError("times must satisfy 0 < s_1 < ... < s_n < t")
    gaps = np.diff(np.append(s, t))
    partial = np.cumsum(xi)
    value = np.prod(green_hat(gaps, partial, kappa))
    return complex(np.exp(-1j * x * partial[-1]) * value / math.factorial(n))
