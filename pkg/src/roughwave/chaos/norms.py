"""Numerical values of the white-noise chaos norms n! ||g_n(., t, x)||^2.

In the white case the norm is an integral over the ordered simplex in time
and over R^n in the partial-sum frequencies eta_j,

    prod_j sin^2((s_{j+1} - s_j) |eta_j|^(k/2)) / |eta_j|^k * |eta_j - eta_{j-1}|^(1-2H),

with eta_0 = 0 and s_{n+1} = t. Changing variables shows that the norm of
order n scales exactly as t^(n(1 + 2c)), c = (k - 2 + 2H)/k.

Order 1 uses nested quadrature over time and frequency. Order 2 reduces to
one-dimensional integrals: the inner frequency integral only depends on the
outer frequency through a single tabulated function, and the time integral
of the outer sine is elementary. Orders 3 and 4 use Monte Carlo with
heavy-tailed importance sampling of the frequencies.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy import integrate
from scipy.interpolate import CubicSpline
from scipy.special import beta as beta_fn
from scipy.special import binom

from ..errors import AccuracyError, InputError, RegimeError, UnsupportedError
from ..greens import green_hat, y_minus_sin
from ..montecarlo import MCEstimate, mc_mean, ordered_simplex, simplex_volume
from ..params import ModelParams, Regime, ValidatedParams, as_validated
from ..quadrature import (
    DEFAULT_SPEC,
    QuadratureSpec,
    TailTerm,
    integrate_edges,
    integrate_half_line,
    panel_edges,
    panel_nodes,
)

DEFAULT_SAMPLES = 1 << 21
DEFAULT_SEED = 20240917


class Method(str, enum.Enum):
    QUADRATURE = "Quadrature"
    MONTE_CARLO = "MonteCarlo"


@dataclass(frozen=True)
class ChaosOrderResult:
    order: int
    value: float
    error_estimate: float
    method: Method


def _time_scaling_exponent(kappa: float, H: float) -> float:
    return 1 + 2 * (kappa - 2 + 2 * H) / kappa


def _check(p) -> ValidatedParams:
    vp = as_validated(p)
    if not vp.is_white:
        raise UnsupportedError("numerical chaos norms are only available for white time")
    if vp.regime is not Regime.WAVE_SOLVABLE:
        raise RegimeError(f"chaos norms are infinite or undefined in regime {vp.regime.value}")
    return vp


# ---------------------------------------------------------------- order 1


def _first_order_spectral(sigma: float, kappa: float, H: float, q: QuadratureSpec):
    """Frequency integral of sin^2(sigma |eta|^(k/2)) |eta|^(1-2H-k) over R."""
    q1 = (2 / kappa) * (2 - 2 * H) - 3
    fac = 2 * (2 / kappa)

    def f(x):
        return np.sin(sigma * x) ** 2 * x**q1

    tail = [TailTerm(q1, 0.0, 0.5), TailTerm(q1, 2 * sigma, -0.5)]
    res = integrate_half_line(f, tail, q, omega_max=2 * sigma, scale=1 / sigma)
    return fac * res.value, fac * res.error


def _first_order_quadrature(t: float, vp: ValidatedParams, q: QuadratureSpec) -> ChaosOrderResult:
    kappa, H = vp.kappa, vp.hurst_space
    inner_err = [0.0]

    def g(sigma):
        if sigma <= 0:
            return 0.0
        v, e = _first_order_spectral(sigma, kappa, H, q)
        inner_err[0] = max(inner_err[0], e / max(v, 1e-300))
        return v

    value, abserr = integrate.quad(g, 0.0, t, epsabs=0.0, epsrel=max(q.tolerance, 1e-13), limit=200)
    err = abserr + inner_err[0] * value
    return ChaosOrderResult(1, value, err, Method.QUADRATURE)


# ---------------------------------------------------------------- order 2


class InnerSpectralTable:
    """k(eta) = integral over R of sin^2(|v|^(k/2)) |v|^(-k) |v - eta|^(1-2H) dv.

    Tabulated on a logarithmic grid and continued by the two-term expansion
    eta^(1-2H) (K_inf + K_1 eta^(1-k)) above the grid.
    """

    def __init__(self, kappa: float, H: float, q: QuadratureSpec,
                 eta_lo: float = 1e-4, eta_hi: float = 1e4, per_decade: int = 12):
        self.kappa, self.H = kappa, H
        self.power = 1 - 2 * H
        self.eta_lo, self.eta_hi = eta_lo, eta_hi
        n = int(round(per_decade * math.log10(eta_hi / eta_lo))) + 1
        grid = np.logspace(math.log10(eta_lo), math.log10(eta_hi), n)
        vals, errs = zip(*(self._direct(e, q) for e in grid))
        vals, errs = np.array(vals), np.array(errs)
        self.k0, k0_err = self._direct(0.0, q)
        self.error = float(max(np.max(errs / vals), k0_err / self.k0))
        self.k_inf = self._leading(q)
        top = grid >= eta_hi / 10
        x = grid[top] ** (1 - kappa)
        y = vals[top] / grid[top] ** self.power - self.k_inf
        self.k1 = float(np.dot(x, y) / np.dot(x, x))
        resid = np.abs(y - self.k1 * x) / self.k_inf
        self.asymptotic_error = float(resid.max())
        self._spline = CubicSpline(np.log(grid), np.log(vals))
        self._low_exp = min(2.0, kappa + 2 - 2 * H)
        self._k_lo = vals[0]
        self.max_value = float(vals.max())

    def _direct(self, eta: float, q: QuadratureSpec) -> tuple[float, float]:
        kappa, a = self.kappa, self.power
        g = 2 / kappa

        def f(x):
            v = x**g
            return np.sin(x) ** 2 * x ** (g - 3) * (np.abs(v - eta) ** a + (v + eta) ** a)

        # binomial expansion of the bracket, valid once eta / x^g <= 1/2
        base = g - 3 + g * a
        tail = []
        for j in range(40):
            c = 2 * binom(a, 2 * j) * eta ** (2 * j)
            if j > 0 and (eta == 0 or abs(c) * (2 * eta) ** (-2 * j) < 1e-18):
                break
            pw = base - 2 * g * j
            tail += [TailTerm(pw, 0.0, 0.5 * c), TailTerm(pw, 2.0, -0.5 * c)]
        kink = eta ** (kappa / 2) if eta > 0 else 0.0
        res = integrate_half_line(f, tail, q, omega_max=2.0, valid_from=(2 * eta) ** (kappa / 2),
                                  singular=[kink] if kink > 0 else [])
        return g * res.value, g * res.error

    def _leading(self, q: QuadratureSpec) -> float:
        g = 2 / self.kappa
        pw = g - 3

        def f(x):
            return np.sin(x) ** 2 * x**pw

        res = integrate_half_line(f, [TailTerm(pw, 0.0, 0.5), TailTerm(pw, 2.0, -0.5)], q, omega_max=2.0)
        return 2 * g * res.value

    def asymptotic(self, eta):
        return eta**self.power * (self.k_inf + self.k1 * eta ** (1 - self.kappa))

    def __call__(self, eta):
        eta = np.asarray(eta, dtype=float)
        out = np.empty_like(eta)
        hi = eta > self.eta_hi
        lo = eta < self.eta_lo
        mid = ~(hi | lo)
        out[hi] = self.asymptotic(eta[hi])
        out[mid] = np.exp(self._spline(np.log(eta[mid])))
        out[lo] = self.k0 + (self._k_lo - self.k0) * (eta[lo] / self.eta_lo) ** self._low_exp
        return out


@lru_cache(maxsize=16)
def _inner_table(kappa: float, H: float, q: QuadratureSpec) -> InnerSpectralTable:
    return InnerSpectralTable(kappa, H, q)


@lru_cache(maxsize=16)
def _second_order_unit(kappa: float, H: float, q: QuadratureSpec) -> tuple[float, float]:
    """Second chaos norm at t = 1 and its error estimate."""
    k = _inner_table(kappa, H, q)
    g = 2 / kappa
    c = (kappa - 2 + 2 * H) / kappa
    delta = kappa - 3 + 4 * H
    x_osc = 200.0
    eta_osc = x_osc**g
    eta_end = 1e10

    # sigma grid, graded towards 0 where sigma^(2c) k(sigma^g eta) varies on log scale
    s_edges = panel_edges(0.0, 1.0, math.pi / x_osc, [0.0], depth=1e-18)

    def q_parts(eta1, m):
        """Smooth and oscillatory parts of the time integral; below x_osc the
        oscillatory part is folded into the smooth one to avoid cancellation."""
        s, w = panel_nodes(s_edges, m)
        amp = s ** (2 * c) * k(np.outer(eta1, s**g))
        x1 = eta1 ** (kappa / 2)
        smooth = 0.5 * amp @ (w * (1 - s))
        osc = np.zeros_like(eta1)
        near = x1 <= x_osc
        if near.any():
            xs = x1[near]
            ker = y_minus_sin(2 * np.outer(xs, 1 - s)) / (4 * xs[:, None])
            smooth[near] = np.sum(amp[near] * ker * w, axis=1)
        return smooth, osc

    def outer(eta1, m):
        smooth, osc = q_parts(eta1, m)
        return eta1 ** (1 - 2 * H - kappa) * (smooth + osc)

    # outer integral: oscillation-resolving panels up to eta_osc, geometric beyond
    e_near = panel_edges(0.0, eta_osc, 2 * math.pi / (kappa * max(eta_osc ** (kappa / 2 - 1), 1.0)) / 2,
                         [0.0], depth=1e-24)
    e_far = np.geomspace(eta_osc, eta_end, int(4 * math.log2(eta_end / eta_osc)) + 1)
    total, err = 0.0, 0.0
    for edges in (e_near, e_far):
        vals = []
        for m in (24, 16):
            x, w = panel_nodes(edges, m)
            vals.append(math.fsum(w * outer(x, m)))
        total += 2 * vals[0]
        err += 2 * abs(vals[0] - vals[1])

    # dropped oscillatory part above eta_osc: |Q_osc(eta)| <= k(eta) / (4 eta^k)
    x, w = panel_nodes(e_far, 24)
    drop_bound = 2 * math.fsum(w * x ** (1 - 2 * H - 2 * kappa) * k(x)) / 4

    # analytic tail beyond eta_end from the expansion of k
    a0 = 2 * c + g * (1 - 2 * H)
    a1 = a0 + g * (1 - kappa)
    m0 = beta_fn(a0 + 1, 2)
    m1 = beta_fn(a1 + 1, 2)
    tail = k.k_inf * m0 * eta_end ** (-delta) / delta + k.k1 * m1 * eta_end ** (1 - kappa - delta) / (
        kappa - 1 + delta)
    # consistency of the expansion with the computed integrand at eta_end
    smooth_end, _ = q_parts(np.array([eta_end]), 24)
    pred = 0.5 * eta_end ** (1 - 2 * H) * (k.k_inf * m0 + k.k1 * m1 * eta_end ** (1 - kappa))
    rel = abs(smooth_end[0] / pred - 1)
    value = total + tail
    err += rel * abs(tail) + drop_bound + (k.error + k.asymptotic_error * 1e-2) * value
    return value, err


def _second_order_quadrature(t: float, vp: ValidatedParams, q: QuadratureSpec) -> ChaosOrderResult:
    value, err = _second_order_unit(vp.kappa, vp.hurst_space, q)
    scale = t ** (2 * _time_scaling_exponent(vp.kappa, vp.hurst_space))
    return ChaosOrderResult(2, value * scale, err * scale, Method.QUADRATURE)


# ---------------------------------------------------------------- Monte Carlo


def proposal_tail_index(kappa: float, H: float) -> float:
    """Tail index of the symmetric Pareto proposal for each frequency.

    The integrand's slowest decay in a single frequency is |eta|^(-1-d)
    with d = k - 3 + 4H, so a proposal with the same index keeps the
    variance finite.
    """
    return kappa - 3 + 4 * H


def chaos_integrand(s: np.ndarray, eta: np.ndarray, t: float, kappa: float, H: float) -> np.ndarray:
    """Integrand of the white chaos norm at ordered times ``s`` and partial sums ``eta``.

    Arrays have shape (samples, n).
    """
    gaps = np.diff(np.concatenate([s, np.full((s.shape[0], 1), t)], axis=1), axis=1)
    g = green_hat(gaps, eta, kappa) ** 2
    steps = np.diff(np.concatenate([np.zeros((eta.shape[0], 1)), eta], axis=1), axis=1)
    return np.prod(g * np.abs(steps) ** (1 - 2 * H), axis=1)


def chaos_norm_monte_carlo(n: int, t: float, p: ModelParams | ValidatedParams,
                           samples: int = DEFAULT_SAMPLES, seed: int = DEFAULT_SEED) -> MCEstimate:
    vp = _check(p)
    kappa, H = vp.kappa, vp.hurst_space
    d = proposal_tail_index(kappa, H)
    vol = simplex_volume(n, t)

    def weights(rng, size):
        s = ordered_simplex(rng, size, n, t)
        u = rng.random((size, n))
        sign = np.where(rng.random((size, n)) < 0.5, -1.0, 1.0)
        mag = u ** (-1.0 / d) - 1.0
        dens = 0.5 * d * (1.0 + mag) ** (-1.0 - d)
        eta = sign * mag
        return vol * chaos_integrand(s, eta, t, kappa, H) / np.prod(dens, axis=1)

    return mc_mean(weights, samples, seed, n)


def chaos_norm_white(n: int, t: float, p: ModelParams | ValidatedParams,
                     q: QuadratureSpec = DEFAULT_SPEC, *, method: Method | None = None,
                     samples: int = DEFAULT_SAMPLES, seed: int = DEFAULT_SEED) -> ChaosOrderResult:
    """n! ||g_n(., t, x)||^2 for white-in-time noise, n <= 4.

    By default orders 1 and 2 use quadrature and orders 3 and 4 Monte Carlo;
    ``method`` forces Monte Carlo for orders 1 and 2 as an independent check.
    """
    if not 1 <= n <= 4:
        raise InputError("numerical chaos norms are available for 1 <= n <= 4")
    if t < 0:
        raise InputError("horizon must be nonnegative")
    vp = _check(p)
    if method is None:
        method = Method.QUADRATURE if n <= 2 else Method.MONTE_CARLO
    method = Method(method)
    if t == 0:
        return ChaosOrderResult(n, 0.0, 0.0, method)
    if method is Method.MONTE_CARLO:
        est = chaos_norm_monte_carlo(n, t, vp, samples, seed)
        return ChaosOrderResult(n, est.mean, est.error, method)
    if n == 1:
        res = _first_order_quadrature(t, vp, q)
    elif n == 2:
        res = _second_order_quadrature(t, vp, q)
    else:
        raise UnsupportedError("quadrature is only available for orders 1 and 2")
    if not res.error_estimate <= max(q.tolerance, 1e-4) * res.value:
        raise AccuracyError(f"order {n} chaos norm", res.error_estimate / res.value)
    return res
