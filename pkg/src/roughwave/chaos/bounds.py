"""Explicit upper bound on the chaos norms."""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy.special import gammaln

from ..errors import AccuracyError, CapacityError, DivergenceError, InputError
from ..params import ModelParams, Regime, ValidatedParams, as_validated
from ..quadrature import DEFAULT_SPEC, QuadratureSpec, TailTerm, integrate_half_line
from .indices import AlphaIndex, log_weighted_index_sums

MAX_BOUND_ORDER = 100_000


def j_exponent(a: int, kappa: float, H: float) -> float:
    """Power of |eta| multiplying sin^2(eta)/eta^2 in the J integral."""
    return (2 / kappa) * a * (1 - 2 * H) + 2 / kappa - 1


@lru_cache(maxsize=256)
def _j_cached(a: int, kappa: float, H: float, q: QuadratureSpec) -> tuple[float, float]:
    e = j_exponent(a, kappa, H)
    if not -1.0 < e < 1.0:
        raise DivergenceError(
            f"sin^2(x) x^({e - 2:.6g}) is not integrable on (0, inf); exponent must lie in (-3, -1)"
        )
    p = e - 2

    def f(u):
        return np.sin(u) ** 2 * u**p

    res = integrate_half_line(f, [TailTerm(p, 0.0, 0.5), TailTerm(p, 2.0, -0.5)], q, omega_max=2.0)
    return 2 * res.value, 2 * res.error


def J_integral(a: int, p: ModelParams | ValidatedParams, q: QuadratureSpec = DEFAULT_SPEC) -> float:
    """Integral over the real line of sin^2(e)/e^2 |e|^((2/k) a (1-2H) + 2/k - 1)."""
    if a not in (0, 1, 2):
        raise InputError("a must be 0, 1 or 2")
    params = p.params if isinstance(p, ValidatedParams) else p
    value, err = _j_cached(a, params.kappa, params.hurst_space, q)
    if err > q.tolerance * value:
        raise AccuracyError("J integral", err / value)
    return value


@dataclass(frozen=True)
class BetaExponents:
    betas: tuple[float, ...]
    total: float


def beta_entry(a: int, kappa: float, H: float, H0: float) -> float:
    return (2 - 2 / kappa - (2 / kappa) * a * (1 - 2 * H)) / (2 * H0)


def beta_exponents(alpha: AlphaIndex, p: ValidatedParams) -> BetaExponents:
    betas = tuple(beta_entry(a, p.kappa, p.hurst_space, p.hurst_time) for a in alpha)
    return BetaExponents(betas, math.fsum(betas))


def beta_total(n: int, p: ValidatedParams) -> float:
    kappa, H, H0 = p.kappa, p.hurst_space, p.hurst_time
    return (n / H0) * ((1 - 2 / kappa) + 2 * H / kappa)


def log_upper_bounds(n_max: int, t: float, p: ModelParams | ValidatedParams,
                     q: QuadratureSpec = DEFAULT_SPEC) -> np.ndarray:
    """Natural logs of the explicit bound for orders 1..n_max (``-inf`` at t = 0)."""
    vp = as_validated(p).require(Regime.WAVE_SOLVABLE)
    if n_max > MAX_BOUND_ORDER:
        raise CapacityError(f"order {n_max} exceeds {MAX_BOUND_ORDER}")
    kappa, H, H0 = vp.kappa, vp.hurst_space, vp.hurst_time
    two_h0 = 2 * H0
    log_w = tuple(
        (math.log(2 / kappa) + math.log(J_integral(a, vp, q))) / two_h0
        + math.lgamma(1 + beta_entry(a, kappa, H, H0))
        for a in (0, 1, 2)
    )
    log_sums = log_weighted_index_sums(log_w, n_max)
    n = np.arange(1, n_max + 1, dtype=float)
    beta = beta_total(1, vp) * n
    log_t = math.log(t) if t > 0 else -math.inf
    with np.errstate(invalid="ignore"):
        inner = log_sums + (n + beta) * log_t - gammaln(n + 1 + beta)
    return (two_h0 - 1) * gammaln(n + 1) + two_h0 * inner


def chaos_norm_upper_bound(n: int, t: float, p: ModelParams | ValidatedParams,
                           q: QuadratureSpec = DEFAULT_SPEC) -> float:
    """Fully explicit upper bound on n! ||g_n(., t, x)||^2.

    (n!)^(2H0-1) [ sum_alpha (2/k)^(n/2H0) prod J(alpha_j)^(1/2H0)
    prod Gamma(1+beta_j) t^(n+beta) / Gamma(n+1+beta) ]^(2H0).
    """
    if n < 1:
        raise InputError("order must be at least 1")
    if t < 0:
        raise InputError("horizon must be nonnegative")
    if t == 0:
        return 0.0
    return float(np.exp(log_upper_bounds(n, t, p, q)[-1]))
