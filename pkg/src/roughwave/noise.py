"""Spectral data of the noise: density, normalizing constant, temporal kernel."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .errors import AccuracyError, ParameterDomainError, SingularityError, UnsupportedError
from .params import TemporalKind
from .quadrature import DEFAULT_SPEC, QuadratureSpec, TailTerm, integrate_half_line


def c_H(H: float) -> float:
    """Normalizing constant Gamma(2H+1) sin(pi H) / (2 pi)."""
    if not 0.0 < H < 1.0:
        raise ParameterDomainError("H", H, "must lie in (0, 1)")
    return math.gamma(2 * H + 1) * math.sin(math.pi * H) / (2 * math.pi)


def spectral_density(xi, H: float):
    """|xi|^(1-2H)."""
    if not 0.0 < H < 1.0:
        raise ParameterDomainError("H", H, "must lie in (0, 1)")
    out = np.abs(np.asarray(xi, dtype=float)) ** (1 - 2 * H)
    return out if out.ndim else float(out)


@dataclass(frozen=True)
class TemporalKernel:
    kind: TemporalKind
    hurst_time: float = 0.5


def temporal_kernel_value(t: float, k: TemporalKernel) -> float:
    """|t|^(2H0-2) for the colored kernel."""
    if TemporalKind(k.kind) is TemporalKind.WHITE:
        raise UnsupportedError("the white temporal kernel is a Dirac mass, not a function")
    if t == 0:
        raise SingularityError("colored temporal kernel is singular at t = 0")
    return abs(t) ** (2 * k.hurst_time - 2)


class SineIdentity(NamedTuple):
    lhs: float
    rhs: float
    lhs_error: float


def sine_product_rhs(r: float, s: float, H: float) -> float:
    return 0.25 * (abs(r + s) ** (2 * H) - abs(r - s) ** (2 * H))


def fbm_sine_identity(r: float, s: float, H: float,
                      q: QuadratureSpec = DEFAULT_SPEC) -> SineIdentity:
    """Spectral integral of sin(r|e|) sin(s|e|) |e|^(-1-2H), weighted by c_H.

    The closed form 1/4 (|r+s|^2H - |r-s|^2H) is returned alongside.
    """
    if r <= 0 or s <= 0:
        raise ParameterDomainError("r" if r <= 0 else "s", r if r <= 0 else s, "must be positive")
    p = -1 - 2 * H

    def f(u):
        return np.sin(r * u) * np.sin(s * u) * u**p

    tail = [TailTerm(p, r + s, -0.5)]
    if r == s:
        tail.append(TailTerm(p, 0.0, 0.5))
    else:
        tail.append(TailTerm(p, abs(r - s), 0.5))
    scale = 1.0 / (r + s)
    res = integrate_half_line(f, tail, q, omega_max=r + s, scale=scale)
    lhs = 2 * c_H(H) * res.value
    err = 2 * c_H(H) * res.error
    if not err <= q.tolerance * abs(lhs) * 10:
        raise AccuracyError("sine-product identity quadrature", err / abs(lhs))
    return SineIdentity(lhs, sine_product_rhs(r, s, H), err)
