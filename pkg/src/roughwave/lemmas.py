"""Independent numerical certificates for the auxiliary integral identities and bounds.

Each check compares a computed left side with a closed-form or bounding
right side and records whether the discrepancy is below the tolerance
registered for that identity.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np
from scipy import integrate
from scipy.special import gamma as gamma_fn
from scipy.special import gammaln, logsumexp

from .chaos.probe import KernelPrimitive
from .errors import InputError, ParameterDomainError
from .fitting import SlopeFit, fit_line
from .montecarlo import mc_mean, ordered_simplex, simplex_volume
from .noise import fbm_sine_identity
from .quadrature import DEFAULT_SPEC, QuadratureSpec, TailTerm, integrate_half_line
from .regularity import sine_increment_cap
from .verdicts import Convergence


class LemmaId(str, enum.Enum):
    GAUSSIAN_SCALING = "gaussian_scaling"
    DIRICHLET_SIMPLEX = "dirichlet_simplex"
    STIRLING_RATIO = "stirling_ratio"
    ML_SERIES_GROWTH = "ml_series_growth"
    SINE_POWER = "sine_power_integral"
    FBM_SINE_IDENTITY = "fbm_sine_identity"
    LAPLACE_SINE = "laplace_sine"
    CAPPED_SINE = "capped_sine_bound"
    SINE_INCREMENT = "sine_increment_cap"


TOLERANCES = {
    LemmaId.GAUSSIAN_SCALING: 1e-8,
    LemmaId.DIRICHLET_SIMPLEX: 2e-2,
    LemmaId.STIRLING_RATIO: 1e-2,
    LemmaId.ML_SERIES_GROWTH: 5e-2,
    LemmaId.SINE_POWER: 1e-8,
    LemmaId.FBM_SINE_IDENTITY: 1e-3,
    LemmaId.LAPLACE_SINE: 1e-8,
    LemmaId.CAPPED_SINE: 1e-6,
    LemmaId.SINE_INCREMENT: 1e-12,
}


@dataclass(frozen=True)
class LemmaCertificate:
    lemma_id: LemmaId
    lhs: float
    rhs: float
    rel_error: float
    passed: bool
    tolerance: float
    detail: str = ""


def _equality(lemma: LemmaId, lhs: float, rhs: float, detail: str = "") -> LemmaCertificate:
    tol = TOLERANCES[lemma]
    rel = abs(lhs - rhs) / abs(rhs) if rhs != 0 else abs(lhs)
    return LemmaCertificate(lemma, float(lhs), float(rhs), float(rel), bool(rel < tol), tol, detail)


def _inequality(lemma: LemmaId, lhs: float, rhs: float, detail: str = "") -> LemmaCertificate:
    """lhs <= rhs; the recorded error is the relative excess, zero when the bound holds."""
    tol = TOLERANCES[lemma]
    excess = max(0.0, (lhs - rhs) / abs(rhs))
    return LemmaCertificate(lemma, float(lhs), float(rhs), float(excess), bool(excess < tol), tol, detail)


def _gaussian_moment(a: float, theta: float, q: QuadratureSpec) -> float:
    # algebraic weight handles |x|^theta at the origin
    edge = 1 / math.sqrt(a)
    near, _ = integrate.quad(lambda x: math.exp(-a * x * x), 0, edge, weight="alg", wvar=(theta, 0),
                             epsabs=0, epsrel=q.tolerance * 1e-2)
    far, _ = integrate.quad(lambda x: math.exp(-a * x * x) * x**theta, edge, math.inf,
                            epsabs=0, epsrel=q.tolerance * 1e-2)
    return 2 * (near + far)


def gaussian_scaling(a: float, theta: float, q: QuadratureSpec = DEFAULT_SPEC) -> LemmaCertificate:
    """int exp(-a x^2)|x|^theta dx against a^(-(1+theta)/2) times the a = 1 value."""
    if not a > 0:
        raise ParameterDomainError("a", a, "must be positive")
    if not theta > -1:
        raise ParameterDomainError("theta", theta, "must exceed -1")
    lhs = _gaussian_moment(a, theta, q)
    rhs = a ** (-(1 + theta) / 2) * _gaussian_moment(1.0, theta, q)
    return _equality(LemmaId.GAUSSIAN_SCALING, lhs, rhs, f"a={a}, theta={theta}")


def dirichlet_closed_form(alphas: Sequence[float], t: float) -> float:
    al = np.asarray(alphas, dtype=float)
    n = al.size
    log_v = np.sum(gammaln(al + 1)) + (al.sum() + n) * math.log(t) - gammaln(al.sum() + n + 1)
    return float(math.exp(log_v))


def dirichlet_simplex(alphas: Sequence[float], t: float, seed: int = 11,
                      samples: int = 1_000_000) -> LemmaCertificate:
    """Monte Carlo simplex integral of prod (r_{i+1} - r_i)^alpha_i, r_{n+1} = t."""
    al = np.asarray(alphas, dtype=float)
    if al.ndim != 1 or not 1 <= al.size <= 6:
        raise InputError("between one and six exponents are supported")
    if np.any(al <= -1):
        raise ParameterDomainError("alphas", alphas, "every exponent must exceed -1")
    if not t > 0:
        raise InputError("t must be positive")
    n = al.size
    vol = simplex_volume(n, t)

    def weights(rng, size):
        r = ordered_simplex(rng, size, n, t)
        gaps = np.diff(np.concatenate([r, np.full((size, 1), t)], axis=1), axis=1)
        return vol * np.prod(gaps**al, axis=1)

    est = mc_mean(weights, samples, seed, n)
    rhs = dirichlet_closed_form(al, t)
    return _equality(LemmaId.DIRICHLET_SIMPLEX, est.mean, rhs,
                     f"alphas={tuple(al.tolist())}, t={t}, mc_error={est.error:.3g}")


def stirling_ratio(a: float, b: float, n_values: Sequence[int]) -> list[float]:
    """Gamma(an+b) / [(n!)^a a^(an+b-1/2) n^(b-1/2-a/2)] evaluated in log space."""
    if not a > 0:
        raise ParameterDomainError("a", a, "must be positive")
    if not 0 <= b <= 1:
        raise ParameterDomainError("b", b, "must lie in [0, 1]")
    n = np.asarray(n_values, dtype=float)
    if np.any(n < 1) or np.any(np.diff(n) <= 0) or n.max() > 400:
        raise InputError("n_values must be increasing integers in [1, 400]")
    log_r = (gammaln(a * n + b) - a * gammaln(n + 1) - (a * n + b - 0.5) * math.log(a)
             - (b - 0.5 - a / 2) * np.log(n))
    return np.exp(log_r).tolist()


def stirling_limit(a: float) -> float:
    """Exact limit of the ratio above as n grows, from Stirling's formula."""
    return (2 * math.pi) ** ((1 - a) / 2)


def stirling_certificate(a: float, b: float,
                         n_values: Sequence[int] = (50, 100, 200, 400)) -> LemmaCertificate:
    """The last ratio against 1."""
    last = stirling_ratio(a, b, n_values)[-1]
    return _equality(LemmaId.STIRLING_RATIO, last, 1.0,
                     f"a={a}, b={b}, n={n_values[-1]}, exact limit={stirling_limit(a):.6g}")


def log_ml_series(a: float, x: float) -> float:
    """log sum_n x^n/(n!)^a, summed over the window where terms are within e^-800 of the peak."""
    if not (a > 0 and x > 0):
        raise InputError("need a > 0 and x > 0")
    peak = x ** (1 / a)
    width = int(math.ceil(40 * math.sqrt(peak / a + 1))) + 50
    lo = max(0, int(peak) - width)
    n = np.arange(lo, int(peak) + width + 1, dtype=float)
    return float(logsumexp(n * math.log(x) - a * gammaln(n + 1)))


ML_X_VALUES = (1e4, 1e5, 1e6, 1e7, 1e8)


def ml_series_growth(a: float, x_values: Sequence[float] = ML_X_VALUES) -> SlopeFit:
    """Fit of log(log S(x)) against log x with S(x) = sum_n x^n/(n!)^a."""
    x = np.asarray(x_values, dtype=float)
    if x.size < 4 or np.any(x < 10):
        raise InputError("need at least four x values, all at least 10")
    ll = [math.log(log_ml_series(a, v)) for v in x]
    return fit_line(np.log(x), ll)


def ml_series_certificate(a: float, x_values: Sequence[float] = ML_X_VALUES) -> LemmaCertificate:
    fit = ml_series_growth(a, x_values)
    return _equality(LemmaId.ML_SERIES_GROWTH, fit.slope, 1 / a, f"a={a}")


def sine_power_closed_form(alpha: float) -> float:
    """int_0^inf sin^2(x) x^-alpha dx for 1 < alpha < 3."""
    mu = 1 - alpha
    if alpha == 2.0:
        return math.pi / 2
    return -math.pi / (2 * math.sin(math.pi * mu / 2) * gamma_fn(1 - mu) * 2 ** (mu + 1))


def sine_power_verdict(alpha: float) -> Convergence:
    """Endpoint analysis: x^(2-alpha) near zero and x^-alpha at infinity must both be integrable."""
    ok = 2 - alpha > -1 and -alpha < -1
    return Convergence.CONVERGENT if ok else Convergence.DIVERGENT


def sine_power_integral(alpha: float, cutoff: float) -> tuple[float, Convergence]:
    """(int_0^cutoff sin^2(x) x^-alpha dx, verdict); the value is inf when the origin diverges."""
    if not 0 < alpha < 4:
        raise ParameterDomainError("alpha", alpha, "must lie in (0, 4)")
    if cutoff < 1e3:
        raise InputError("cutoff must be at least 1e3")
    verdict = sine_power_verdict(alpha)
    if alpha >= 3:
        return math.inf, verdict
    return float(KernelPrimitive("sin2", -alpha)(np.array([cutoff]))[0]), verdict


def sine_power_certificate(alpha: float, q: QuadratureSpec = DEFAULT_SPEC) -> LemmaCertificate:
    """Half-line quadrature of a convergent case against its closed form."""
    if sine_power_verdict(alpha) is not Convergence.CONVERGENT:
        raise ParameterDomainError("alpha", alpha, "certificate needs 1 < alpha < 3")
    p = -alpha

    def f(x):
        # x^(2-alpha) is removed on (0, 1) and added back exactly
        return np.sin(x) ** 2 * x**p - np.where(x < 1, x ** (2 + p), 0.0)

    res = integrate_half_line(f, [TailTerm(p, 0.0, 0.5), TailTerm(p, 2.0, -0.5)], q,
                              omega_max=2.0, singular=[1.0])
    lhs = res.value + 1 / (3 + p)
    return _equality(LemmaId.SINE_POWER, lhs, sine_power_closed_form(alpha), f"alpha={alpha}")


def capped_sine_constant(lam: float, beta: float, gamma: float) -> float:
    """max of int_{|y|<=2} |y|^e dy and int_{|y|>2} |y|^(e-1) dy, e = (beta + 2 gamma - 1)/lam."""
    e = (beta + 2 * gamma - 1) / lam
    inner, _ = integrate.quad(lambda y: y**e, 0, 2, epsabs=0, epsrel=1e-12)
    outer, _ = integrate.quad(lambda y: y ** (e - 1), 2, math.inf, epsabs=0, epsrel=1e-12)
    return max(2 * inner, 2 * outer)


def capped_sine_bound(a: float, b: float, lam: float, beta: float, gamma: float,
                      q: QuadratureSpec = DEFAULT_SPEC) -> LemmaCertificate:
    """int sin^2(ax)|x|^(beta-2) min(b|x|^lam, 2) dx <= C a^(2 gamma) b^((1-beta-2 gamma)/lam)."""
    if not (a > 0 and b > 0 and lam >= 1 and 0 <= beta < 1 and 0 <= gamma <= 1):
        raise ParameterDomainError("parameters", (a, b, lam, beta, gamma), "outside the admissible box")
    if not 1 - lam < beta + 2 * gamma < 1:
        raise ParameterDomainError("beta + 2 gamma", beta + 2 * gamma, f"must lie in ({1 - lam}, 1)")
    kink = (2 / b) ** (1 / lam)
    p = beta - 2

    def f(x):
        return 2 * np.sin(a * x) ** 2 * x**p * np.minimum(b * x**lam, 2.0)

    res = integrate_half_line(f, [TailTerm(p, 0.0, 2.0), TailTerm(p, 2 * a, -2.0)], q,
                              omega_max=2 * a, valid_from=kink, singular=[kink], scale=1 / a)
    rhs = capped_sine_constant(lam, beta, gamma) * a ** (2 * gamma) * b ** ((1 - beta - 2 * gamma) / lam)
    return _inequality(LemmaId.CAPPED_SINE, res.value, rhs,
                       f"a={a}, b={b}, lambda={lam}, beta={beta}, gamma={gamma}")


def laplace_sine(a: float) -> float:
    """int_0^inf exp(-t) sin(a t) dt = a/(1 + a^2)."""
    if a < 0:
        raise ParameterDomainError("a", a, "must be nonnegative")
    return a / (1 + a * a)


def laplace_sine_certificate(a: float, q: QuadratureSpec = DEFAULT_SPEC) -> LemmaCertificate:
    if a == 0:
        return _equality(LemmaId.LAPLACE_SINE, 0.0, laplace_sine(0.0), "a=0")
    # Fourier-weighted quadrature on the half line
    lhs, _ = integrate.quad(lambda t: math.exp(-t), 0, math.inf, weight="sin", wvar=a)
    return _equality(LemmaId.LAPLACE_SINE, lhs, laplace_sine(a), f"a={a}")


def fbm_identity_certificate(r: float, s: float, H: float,
                             q: QuadratureSpec = DEFAULT_SPEC) -> LemmaCertificate:
    res = fbm_sine_identity(r, s, H, q)
    return _equality(LemmaId.FBM_SINE_IDENTITY, res.lhs, res.rhs, f"r={r}, s={s}, H={H}")


def sine_increment_certificate(seed: int = 5, samples: int = 100_000) -> LemmaCertificate:
    """Worst ratio of |sin((t+h)x) - sin(tx)| to its cap over random draws."""
    rng = np.random.Generator(np.random.Philox(seed))
    t = rng.uniform(-10, 10, samples)
    h = rng.uniform(-5, 5, samples) * 10.0 ** rng.uniform(-4, 1, samples)
    x = rng.uniform(-10, 10, samples) * 10.0 ** rng.uniform(-3, 2, samples)
    gam = rng.uniform(1e-3, 1, samples)
    worst = 0.0
    for g in np.unique(np.round(gam, 3)):
        idx = np.round(gam, 3) == g
        lhs, cap = sine_increment_cap(t[idx], h[idx], x[idx], float(g))
        worst = max(worst, float(np.max(lhs / np.maximum(cap, 1e-300))))
    return _inequality(LemmaId.SINE_INCREMENT, worst, 1.0, f"{samples} random draws")


FBM_GRID = tuple((r, s, H) for r in (0.25, 0.5, 1.0, 2.0) for s in (0.25, 0.5, 1.0, 2.0)
                 for H in (0.26, 0.3, 0.4, 0.49))


def certificate_suite(q: QuadratureSpec = DEFAULT_SPEC, seed: int = 11) -> list[LemmaCertificate]:
    """Every certificate over its registered parameter grid."""
    out: list[LemmaCertificate] = []
    for a, th in ((1.0, 0.0), (4.0, 0.0), (2.0, 1.0), (0.5, -0.5), (3.0, 2.5)):
        out.append(gaussian_scaling(a, th, q))
    for k, (al, t) in enumerate((((0.0,), 1.0), ((1.0, 1.0), 1.0), ((0.5, -0.3, 1.2), 2.0))):
        out.append(dirichlet_simplex(al, t, seed=seed + k))
    for a, b in ((1.0, 1.0), (2.0, 1.0), (1.6, 0.5)):
        out.append(stirling_certificate(a, b))
    for a in (1.0, 1.6, 2.0):
        out.append(ml_series_certificate(a))
    for alpha in (1.5, 2.0, 2.5):
        out.append(sine_power_certificate(alpha, q))
    for args in ((1.0, 1.0, 1.0, 0.5, 0.1), (2.0, 1.0, 2.0, 0.3, 0.2)):
        out.append(capped_sine_bound(*args, q=q))
    for a in (0.0, 0.5, 1.0, 3.0):
        out.append(laplace_sine_certificate(a, q))
    for r, s, H in FBM_GRID:
        out.append(fbm_identity_certificate(r, s, H, q))
    out.append(sine_increment_certificate(seed))
    return out
