"""First-chaos increment variances in time and space and Hölder exponent fits.

With white time noise the first chaos of u(t+h, x) - u(t, x) has variance

    int_0^t int |G_{t+h-s}(xi) - G_{t-s}(xi)|^2 mu(dxi) ds      (A part)
  + int_t^{t+h} int |G_{t+h-s}(xi)|^2 mu(dxi) ds                 (B part)

and the space increment has variance
int_0^t int sin^2((t-s)x)/x^2 |1 - exp(-i z xi)|^2 mu(dxi) ds, with
x = |xi|^(k/2) and mu(dxi) = |xi|^(1-2H) dxi. The time integrals are
elementary, which leaves one-dimensional frequency integrals.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import AccuracyError, InputError, UnsupportedError
from .fitting import SlopeFit, fit_loglog
from .greens import y_minus_sin
from .params import ExponentSet, ModelParams, Regime, ValidatedParams, as_validated, exponents
from .quadrature import DEFAULT_SPEC, QuadratureSpec, TailTerm, integrate_half_line
from .verdicts import Consistency

DYADIC_OFFSETS = tuple(2.0**-k for k in range(4, 10))
SLOPE_TOLERANCE = 0.05
MIN_SAMPLES = 5


class IncrementKind(str, enum.Enum):
    TIME = "Time"
    SPACE = "Space"


@dataclass(frozen=True)
class IncrementSample:
    offset: float
    variance: float
    quadrature_error: float
    a_part: float = math.nan
    b_part: float = math.nan


def _white_solvable(p) -> ValidatedParams:
    vp = as_validated(p).require(Regime.WAVE_SOLVABLE)
    if not vp.is_white:
        raise UnsupportedError("increment variances are implemented for white time only")
    return vp


def _checked(res, q: QuadratureSpec, what: str) -> tuple[float, float]:
    if res.error > q.tolerance * abs(res.value):
        raise AccuracyError(what, res.error / abs(res.value))
    return res.value, res.error


def time_increment_variance(t: float, h: float, p: ModelParams | ValidatedParams,
                            q: QuadratureSpec = DEFAULT_SPEC) -> IncrementSample:
    """Variance of the first-chaos time increment over [t, t + h], split into parts."""
    vp = _white_solvable(p)
    if not (t > 0 and 0 < h <= t):
        raise InputError("need t > 0 and 0 < h <= t")
    kappa, H = vp.kappa, vp.hurst_space
    g = 2 / kappa
    q1 = g * (2 - 2 * H) - 3
    A = 2 * t + h
    ca = 2 * g  # both signs of xi and the change to x = |xi|^(k/2)

    def fa(x):
        one_minus_cos = 2 * np.sin(0.5 * h * x) ** 2
        return ca * one_minus_cos * (t + (np.sin(A * x) - np.sin(h * x)) / (2 * x)) * x**q1

    # (1 - cos hx)(t + (sin Ax - sin hx)/(2x)) expanded into exact power-times-wave terms
    tail_a = [
        TailTerm(q1, 0.0, ca * t),
        TailTerm(q1, h, -ca * t),
        TailTerm(q1 - 1, A, -0.5j * ca),
        TailTerm(q1 - 1, h, 0.5j * ca),
        TailTerm(q1 - 1, A + h, 0.25j * ca),
        TailTerm(q1 - 1, A - h, 0.25j * ca),
        TailTerm(q1 - 1, 2 * h, -0.25j * ca),
    ]
    res_a = integrate_half_line(fa, tail_a, q, omega_max=A + h, scale=1 / (A + h),
                                singular=[1 / h])
    a_val, a_err = _checked(res_a, q, "time increment (A part)")

    def fb(x):
        return ca * y_minus_sin(2 * h * x) / (4 * x) * x**q1

    tail_b = [TailTerm(q1, 0.0, ca * h / 2), TailTerm(q1 - 1, 2 * h, 0.25j * ca)]
    res_b = integrate_half_line(fb, tail_b, q, omega_max=2 * h, scale=1 / (2 * h))
    b_val, b_err = _checked(res_b, q, "time increment (B part)")
    return IncrementSample(h, a_val + b_val, a_err + b_err, a_val, b_val)


def space_increment_variance(t: float, z: float, p: ModelParams | ValidatedParams,
                             q: QuadratureSpec = DEFAULT_SPEC) -> IncrementSample:
    """Variance of the first-chaos space increment u(t, x + z) - u(t, x).

    For k = 2 the tail beyond the cutoff is exact. Otherwise the part that
    oscillates in both xi and |xi|^(k/2) is truncated with the first
    integration-by-parts term of the combined phase as its error estimate.
    """
    vp = _white_solvable(p)
    if not t > 0:
        raise InputError("horizon must be positive")
    z = abs(float(z))
    if z == 0.0:
        return IncrementSample(0.0, 0.0, 0.0)
    kappa, H = vp.kappa, vp.hurst_space
    pw = 1 - 2 * H - kappa

    def f(xi):
        x = xi ** (kappa / 2)
        time_part = y_minus_sin(2 * t * x) / x
        return time_part * 2 * np.sin(0.5 * z * xi) ** 2 * xi**pw

    tail = [TailTerm(pw, 0.0, 2 * t), TailTerm(pw, z, -2 * t)]
    remainder = None
    if kappa == 2.0:
        tail += [TailTerm(pw - 1, 2 * t, 1j), TailTerm(pw - 1, 2 * t + z, -0.5j)]
        if 2 * t != z:
            tail.append(TailTerm(pw - 1, 2 * t - z, -0.5j))
    else:
        lead = pw - kappa / 2

        def remainder(Z):
            # -sin(2tx) xi^lead (1 - cos z xi): one slow phase and two combined
            # phases; twice amplitude over phase speed for each
            slow = t * kappa * Z ** (kappa / 2 - 1)
            inv = 1 / slow + 0.5 / (z + slow) + 0.5 / max(abs(z - slow), 1e-300)
            return 2 * Z**lead * inv

    omega = z + 2 * t * max(1.0, kappa / 2)
    res = integrate_half_line(f, tail, q, omega_max=omega, scale=1 / omega,
                              singular=[1 / z], remainder_bound=remainder)
    val, err = _checked(res, q, "space increment")
    return IncrementSample(z, val, err)


@dataclass(frozen=True)
class HolderVerdict:
    kind: IncrementKind
    fit: SlopeFit
    theta_hat: float
    supremum: float
    verdict: Consistency


def _supremum(ex: ExponentSet, kind: IncrementKind) -> float:
    return ex.holder_time_sup if kind is IncrementKind.TIME else ex.holder_space_sup


def holder_verdict(samples: Sequence[IncrementSample], kind: IncrementKind | str,
                   p: ModelParams | ValidatedParams) -> HolderVerdict:
    """Compare half the fitted variance slope with the Hölder supremum.

    Consistent when slope/2 lies within 0.05 of the supremum: the fitted
    rate reaches it, and no order above it is suggested.
    """
    kind = IncrementKind(kind)
    vp = as_validated(p).require(Regime.WAVE_SOLVABLE)
    if len(samples) < MIN_SAMPLES:
        raise InputError(f"need at least {MIN_SAMPLES} samples, got {len(samples)}")
    offs = np.array([s.offset for s in samples], dtype=float)
    if np.any(offs <= 0):
        raise InputError("offsets must be positive")
    steps = np.log2(offs / offs[0])
    if not np.allclose(steps, np.round(steps), atol=1e-9):
        raise InputError("offsets must lie on a dyadic grid")
    fit = fit_loglog(offs, [s.variance for s in samples])
    sup = _supremum(exponents(vp), kind)
    theta = fit.slope / 2
    ok = sup - SLOPE_TOLERANCE <= theta <= sup + SLOPE_TOLERANCE
    return HolderVerdict(kind, fit, theta, sup, Consistency.CONSISTENT if ok else Consistency.INCONSISTENT)


def increment_samples(kind: IncrementKind | str, t: float, offsets: Sequence[float],
                      p: ModelParams | ValidatedParams,
                      q: QuadratureSpec = DEFAULT_SPEC) -> list[IncrementSample]:
    fn = time_increment_variance if IncrementKind(kind) is IncrementKind.TIME else space_increment_variance
    return [fn(t, o, p, q) for o in offsets]


def sine_increment_constant(gamma: float) -> float:
    """C_gamma = 2^(1-gamma)/gamma."""
    if not 0 < gamma <= 1:
        raise InputError("gamma must lie in (0, 1]")
    return 2 ** (1 - gamma) / gamma


def sine_increment_cap(t, h, x, gamma: float):
    """(|sin((t+h)x) - sin(tx)|, C_gamma min(|hx|^gamma, |hx|)), vectorized."""
    t, h, x = (np.asarray(v, dtype=float) for v in (t, h, x))
    lhs = np.abs(np.sin((t + h) * x) - np.sin(t * x))
    hx = np.abs(h * x)
    return lhs, sine_increment_constant(gamma) * np.minimum(hx**gamma, hx)
