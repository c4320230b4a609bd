"""Second-moment bound series, growth-exponent fits and the intermittency report.

The upper series sums the explicit chaos-norm bounds; the lower series uses
the per-order lower terms

    L_n(t) = c^n n! t^(n(2H0 + 2 - (4-4H)/k)) / Gamma(4n(1 - (1-H)/k) + 1)

with c the integral of |eta|^(1-2H) / (1 + |eta|^k)^2 over the half line.
Both are kept in log space; partial sums are formed by log-sum-exp.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np
from scipy import integrate
from scipy.special import beta as beta_fn
from scipy.special import gammaln, logsumexp

from .chaos.bounds import MAX_BOUND_ORDER, log_upper_bounds
from .errors import AccuracyError, InputError, ParameterDomainError, TruncationError
from .fitting import SlopeFit, fit_line
from .montecarlo import mc_mean, ordered_simplex
from .params import ModelParams, Regime, ValidatedParams, as_validated, exponents
from .quadrature import DEFAULT_SPEC, QuadratureSpec, TailTerm, integrate_half_line

TAIL_RATIO = 0.5
AUTO_TAIL_REL = 1e-12
LYAPUNOV_HORIZONS = (2.0, 4.0, 8.0, 16.0)


@dataclass(frozen=True)
class MomentSeries:
    """Terms of order 0..N (order 0 is 1) with their logs, for large horizons."""

    terms: tuple[float, ...]
    log_terms: tuple[float, ...]
    partial_sum: float
    log_partial_sum: float
    tail_bound: float
    orders_used: int

    @property
    def max_term(self) -> float:
        return max(self.terms[1:], default=0.0)


def _series(log_terms: np.ndarray, tail_log: float) -> MomentSeries:
    all_logs = np.concatenate([[0.0], log_terms])
    with np.errstate(over="ignore"):
        terms = np.exp(all_logs)
    log_sum = float(logsumexp(all_logs))
    return MomentSeries(
        terms=tuple(terms.tolist()),
        log_terms=tuple(all_logs.tolist()),
        partial_sum=float(math.exp(log_sum)) if log_sum < 709 else math.inf,
        log_partial_sum=log_sum,
        tail_bound=float(math.exp(tail_log)) if tail_log < 709 else math.inf,
        orders_used=int(log_terms.size),
    )


def _ratio_tail(log_terms: np.ndarray) -> tuple[float, float]:
    """log of the geometric tail bound after the last term, and the last ratio."""
    if log_terms.size < 2 or np.isneginf(log_terms[-1]):
        return -math.inf, 0.0
    log_r = log_terms[-1] - log_terms[-2]
    r = math.exp(log_r) if log_r < 709 else math.inf
    if not r < TAIL_RATIO:
        return math.inf, r
    return float(log_terms[-1] + log_r - math.log1p(-r)), r


def second_moment_upper(t: float, p: ModelParams | ValidatedParams, N: int | None = None,
                        q: QuadratureSpec = DEFAULT_SPEC) -> MomentSeries:
    """1 + sum_{n<=N} of the explicit chaos-norm bounds, with a ratio-test tail.

    With ``N=None`` the order grows until the tail is below 1e-12 of the sum.
    """
    vp = as_validated(p).require(Regime.WAVE_SOLVABLE)
    if t < 0:
        raise InputError("horizon must be nonnegative")
    if t == 0:
        return _series(np.full(N or 1, -math.inf), -math.inf)
    if N is not None:
        if N < 1:
            raise InputError("N must be at least 1")
        logs = log_upper_bounds(N, t, vp, q)
        tail_log, r = _ratio_tail(logs)
        if math.isinf(tail_log) and tail_log > 0:
            raise TruncationError(f"term ratio {r:.4g} at order {N} is not below {TAIL_RATIO}", r)
        return _series(logs, tail_log)
    n = 32
    while True:
        logs = log_upper_bounds(n, t, vp, q)
        tail_log, r = _ratio_tail(logs)
        if tail_log - logsumexp(np.concatenate([[0.0], logs])) < math.log(AUTO_TAIL_REL):
            return _series(logs, tail_log)
        if n >= MAX_BOUND_ORDER:
            raise TruncationError(f"tail not controlled by order {n}", r)
        n = min(2 * n, MAX_BOUND_ORDER)


def lower_c_constant(p: ModelParams | ValidatedParams, q: QuadratureSpec = DEFAULT_SPEC) -> float:
    """Integral of eta^(1-2H) / (1 + eta^k)^2 over (0, inf) by quadrature.

    Only convergence is required, 0 < 2 - 2H < 2k, not solvability.
    """
    vp = as_validated(p)
    kappa, H = vp.kappa, vp.hurst_space
    if not 0 < 2 - 2 * H < 2 * kappa:
        raise ParameterDomainError("hurst_space", H, "the lower constant integral diverges")
    lead = 1 - 2 * H - 2 * kappa
    terms = 6

    def f(x):
        return x ** (1 - 2 * H) / (1 + x**kappa) ** 2

    # (1 + y)^-2 = sum (-1)^j (j+1) y^j with y = eta^-k <= 1/2 beyond 2^(1/k)
    tail = [TailTerm(lead - j * kappa, 0.0, (-1) ** j * (j + 1)) for j in range(terms)]
    last = lead - terms * kappa

    def remainder(Z):
        return (terms + 1) * Z ** (last + 1) / -(last + 1)

    res = integrate_half_line(f, tail, q, valid_from=2 ** (1 / kappa), singular=[1.0],
                              remainder_bound=remainder)
    if res.error > q.tolerance * abs(res.value):
        raise AccuracyError("lower constant quadrature", res.error / res.value)
    return res.value


def lower_c_beta_form(kappa: float, H: float) -> float:
    """The same constant through w = eta^k: (1/k) B(a, 2 - a), a = (2-2H)/k."""
    a = (2 - 2 * H) / kappa
    return beta_fn(a, 2 - a) / kappa


def lower_time_power(p: ValidatedParams) -> float:
    """Power of t per order in the lower terms."""
    return 2 * p.hurst_time + 2 - (4 - 4 * p.hurst_space) / p.kappa


def log_lower_terms(n_max: int, t: float, p: ModelParams | ValidatedParams,
                    q: QuadratureSpec = DEFAULT_SPEC) -> np.ndarray:
    vp = as_validated(p).require(Regime.WAVE_SOLVABLE)
    c = lower_c_constant(vp, q)
    n = np.arange(1, n_max + 1, dtype=float)
    log_t = math.log(t) if t > 0 else -math.inf
    g = 4 * (1 - (1 - vp.hurst_space) / vp.kappa)
    with np.errstate(invalid="ignore"):
        return n * math.log(c) + gammaln(n + 1) + n * lower_time_power(vp) * log_t - gammaln(g * n + 1)


def second_moment_lower(t: float, p: ModelParams | ValidatedParams, N: int | None = None,
                        q: QuadratureSpec = DEFAULT_SPEC) -> MomentSeries:
    """1 + sum of the lower terms up to order N; every partial sum is a lower bound.

    With ``N=None`` orders are added until the remaining terms are negligible.
    """
    vp = as_validated(p).require(Regime.WAVE_SOLVABLE)
    if t < 0:
        raise InputError("horizon must be nonnegative")
    if N is not None and N < 1:
        raise InputError("N must be at least 1")
    if t == 0:
        return _series(np.full(N or 1, -math.inf), -math.inf)
    if N is not None:
        return _series(log_lower_terms(N, t, vp, q), -math.inf)
    n = 32
    while True:
        logs = log_lower_terms(n, t, vp, q)
        tail_log, _ = _ratio_tail(logs)
        if tail_log - logsumexp(np.concatenate([[0.0], logs])) < math.log(AUTO_TAIL_REL) or n >= MAX_BOUND_ORDER:
            return _series(logs, -math.inf)
        n *= 2


def a1_integral(t: float, p: ModelParams | ValidatedParams, q: QuadratureSpec = DEFAULT_SPEC) -> float:
    """Integral over (0, inf) of ((1 - cos(t x)) / x)^2 eta^(1-2H-k), x = eta^(k/2)."""
    vp = as_validated(p).require(Regime.WAVE_SOLVABLE)
    kappa, H = vp.kappa, vp.hurst_space
    g = 2 / kappa
    power = g * (2 - 2 * H) - 5

    def f(x):
        return g * (1 - np.cos(t * x)) ** 2 * x**power

    tail = [TailTerm(power, 0.0, 1.5 * g), TailTerm(power, t, -2 * g), TailTerm(power, 2 * t, 0.5 * g)]
    res = integrate_half_line(f, tail, q, omega_max=2 * t, scale=1 / t)
    if res.error > q.tolerance * abs(res.value):
        raise AccuracyError("A1 quadrature", res.error / res.value)
    return res.value


def a1_scaling_check(t: float, p: ModelParams | ValidatedParams,
                     q: QuadratureSpec = DEFAULT_SPEC) -> tuple[float, float]:
    """(A1(t)/A1(1), t^(4(1-(1-H)/k)))."""
    vp = as_validated(p).require(Regime.WAVE_SOLVABLE)
    if not t > 0:
        raise InputError("horizon must be positive")
    ratio = a1_integral(t, vp, q) / a1_integral(1.0, vp, q)
    predicted = t ** (4 * (1 - (1 - vp.hurst_space) / vp.kappa))
    return ratio, predicted


@dataclass(frozen=True)
class LaplaceCheck:
    lhs: float
    rhs: float
    lhs_error: float


def laplace_sine_product_check(p: ModelParams | ValidatedParams, n: int,
                               q: QuadratureSpec = DEFAULT_SPEC, *, samples: int = 1 << 20,
                               seed: int = 7) -> LaplaceCheck:
    """Laplace transform at 1 of the simplex integral of prod_j sin(gap_j |eta_j|^(k/2)).

    The frequencies are the first n entries of ``q.probe_points``. Order 1 uses
    quadrature; higher orders sample t ~ Exp(1) and uniform ordered times.
    """
    vp = as_validated(p)
    if not 1 <= n <= 3:
        raise InputError("order must be 1, 2 or 3")
    if len(q.probe_points) < n:
        raise InputError(f"need {n} probe frequencies in the quadrature spec")
    a = np.abs(np.asarray(q.probe_points[:n], dtype=float)) ** (vp.kappa / 2)
    rhs = float(np.prod(a / (1 + a * a)))
    if n == 1:
        val, err = integrate.quad(lambda t: math.exp(-t) * math.sin(a[0] * t / 2) ** 2 * 2 / a[0]
                                  if a[0] > 0 else 0.0, 0, math.inf, epsabs=0, epsrel=q.tolerance, limit=500)
        return LaplaceCheck(val, rhs, err)

    def weights(rng, size):
        t = rng.exponential(size=size)
        s = ordered_simplex(rng, size, n, 1.0) * t[:, None]
        gaps = np.diff(np.concatenate([s, t[:, None]], axis=1), axis=1)
        vol = t**n / math.factorial(n)
        return vol * np.prod(np.sin(gaps * a), axis=1)

    est = mc_mean(weights, samples, seed, n)
    return LaplaceCheck(est.mean, rhs, est.error)


def lyapunov_fit(series: Sequence[tuple[float, float]]) -> SlopeFit:
    """Fit log(log M) against log t from pairs (t, log M)."""
    pts = list(series)
    if len(pts) < 4:
        raise InputError("need at least four horizons")
    t = np.array([a for a, _ in pts], dtype=float)
    log_m = np.array([b for _, b in pts], dtype=float)
    if np.any(t <= 0):
        raise InputError("horizons must be positive")
    if np.any(log_m <= 0):
        raise ParameterDomainError("moment", float(np.min(log_m)), "log log M needs M > 1")
    return fit_line(np.log(t), np.log(log_m))


def upper_lyapunov(p: ModelParams | ValidatedParams, horizons: Sequence[float] = LYAPUNOV_HORIZONS,
                   q: QuadratureSpec = DEFAULT_SPEC) -> SlopeFit:
    vp = as_validated(p)
    return lyapunov_fit([(t, second_moment_upper(t, vp, q=q).log_partial_sum) for t in horizons])


def lower_lyapunov(p: ModelParams | ValidatedParams, horizons: Sequence[float] = LYAPUNOV_HORIZONS,
                   q: QuadratureSpec = DEFAULT_SPEC) -> SlopeFit:
    vp = as_validated(p)
    return lyapunov_fit([(t, second_moment_lower(t, vp, q=q).log_partial_sum) for t in horizons])


def log_p_moment_upper(t: float, p_order: float, p: ModelParams | ValidatedParams,
                       q: QuadratureSpec = DEFAULT_SPEC, n_max: int | None = None) -> float:
    """log of sum_n (p-1)^(n/2) sqrt(bound_n(t)), an upper bound on the p-norm of u(t, x)."""
    vp = as_validated(p).require(Regime.WAVE_SOLVABLE)
    if p_order < 2:
        raise InputError("moment order must be at least 2")
    n = 64 if n_max is None else n_max
    while True:
        logs = 0.5 * log_upper_bounds(n, t, vp, q) + 0.5 * np.arange(1, n + 1) * math.log(p_order - 1)
        tail_log, _ = _ratio_tail(logs)
        total = float(logsumexp(np.concatenate([[0.0], logs])))
        if n_max is not None or tail_log - total < math.log(AUTO_TAIL_REL) or n >= MAX_BOUND_ORDER:
            return total
        n = min(2 * n, MAX_BOUND_ORDER)


def p_moment_scaling_fit(t: float, p_orders: Sequence[float], p: ModelParams | ValidatedParams,
                         q: QuadratureSpec = DEFAULT_SPEC) -> SlopeFit:
    """Fit of log(log p-norm bound) against log(p - 1); the slope tends to k/(3k-4+4H)."""
    vp = as_validated(p)
    y = [log_p_moment_upper(t, po, vp, q) for po in p_orders]
    return fit_line(np.log(np.asarray(p_orders, dtype=float) - 1), np.log(y))


@dataclass(frozen=True)
class IntermittencyReport:
    horizon: float
    growth: float
    lower_exponent: float
    upper_exponents: dict
    weakly_intermittent: bool


def intermittency_report(p: ModelParams | ValidatedParams, t: float = 16.0,
                         p_orders: Sequence[float] = (2, 4, 8),
                         q: QuadratureSpec = DEFAULT_SPEC) -> IntermittencyReport:
    """Normalized growth rates log E|u|^p / t^e from the two bound series at horizon t.

    The lower rate uses the second moment only; upper rates use the p-norm series.
    """
    vp = as_validated(p).require(Regime.WAVE_SOLVABLE)
    e = exponents(vp).growth
    rate = t**e
    lower = second_moment_lower(t, vp, q=q).log_partial_sum / rate
    upper = {float(po): po * log_p_moment_upper(t, po, vp, q) / rate for po in p_orders}
    ok = lower > 0 and all(math.isfinite(v) for v in upper.values())
    return IntermittencyReport(float(t), e, lower, upper, ok)
