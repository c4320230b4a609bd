"""Composite Gauss-Legendre quadrature on graded panels with power-law tails.

Integrals over the half line are split at a cutoff ``Z``. Below ``Z`` the
integrand is sampled on panels that are graded geometrically towards
singular points and capped in width by the shortest oscillation period.
Above ``Z`` the caller describes the integrand as a finite sum of terms
``Re(c * exp(i*w*u)) * u**p``, which are integrated in closed form
(non-oscillatory terms) or by their asymptotic expansion (oscillatory terms).
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable, Sequence

import numpy as np

from .errors import AccuracyError, DivergenceError

HI_ORDER = 24
LO_ORDER = 16


class TailPolicy(str, enum.Enum):
    """How oscillatory tails beyond the cutoff are treated.

    ENVELOPE drops them and adds the rigorous bound 2|c|Z^p/|w| to the error.
    POWER_EXTRAPOLATE adds their asymptotic value.
    """

    ENVELOPE = "envelope"
    POWER_EXTRAPOLATE = "power_extrapolate"


@dataclass(frozen=True)
class QuadratureSpec:
    tolerance: float = 1e-8
    max_subdivisions: int = 400_000
    frequency_cutoff: float = 50.0
    tail_policy: TailPolicy = TailPolicy.POWER_EXTRAPOLATE
    probe_points: tuple = field(default=())

    def __post_init__(self):
        if not (0.0 < self.tolerance <= 1e-2):
            raise ValueError(f"tolerance must lie in (0, 1e-2], got {self.tolerance}")
        if not self.frequency_cutoff > 0:
            raise ValueError("frequency_cutoff must be positive")
        if self.max_subdivisions < 1:
            raise ValueError("max_subdivisions must be positive")
        object.__setattr__(self, "tail_policy", TailPolicy(self.tail_policy))
        object.__setattr__(self, "probe_points", tuple(float(v) for v in self.probe_points))


DEFAULT_SPEC = QuadratureSpec()


@dataclass(frozen=True)
class QuadResult:
    value: float
    error: float
    panels: int = 0


@dataclass(frozen=True)
class TailTerm:
    """The function ``Re(coeff * exp(1j*omega*u)) * u**power``."""

    power: float
    omega: float = 0.0
    coeff: complex = 1.0

    def __call__(self, u):
        u = np.asarray(u, dtype=float)
        if self.omega == 0.0:
            return complex(self.coeff).real * u**self.power
        return (complex(self.coeff) * np.exp(1j * self.omega * u)).real * u**self.power


@lru_cache(maxsize=None)
def gauss_legendre(m: int) -> tuple[np.ndarray, np.ndarray]:
    x, w = np.polynomial.legendre.leggauss(m)
    return x, w


def _march(a: float, b: float, width: float, first: float, grow: float) -> list[float]:
    """Edges from ``a`` towards ``b`` with widths first, first*grow, ... capped at width."""
    length = abs(b - a)
    direction = 1.0 if b > a else -1.0
    dist = [0.0]
    d = first
    while dist[-1] < length:
        nxt = dist[-1] + min(d, width)
        if nxt >= length * (1 - 1e-14):
            nxt = length
        dist.append(nxt)
        d = max(d, nxt * (grow - 1.0))
    edges = [a + direction * r for r in dist[:-1]] + [b]
    out = [edges[0]]
    for e in edges[1:]:
        if e != out[-1]:
            out.append(e)
    return out


def panel_edges(a: float, b: float, width: float = math.inf,
                singular: Sequence[float] = (), depth: float = 1e-28,
                grow: float = 2.0) -> np.ndarray:
    """Panel edges on [a, b] graded towards ``a``, ``b`` and interior ``singular`` points.

    Panels start at relative size ``depth`` next to each breakpoint and double
    until they reach ``width``.
    """
    pts = sorted({a, b, *[s for s in singular if a < s < b]})
    out: list[float] = [a]
    for lo, hi in zip(pts[:-1], pts[1:]):
        mid = 0.5 * (lo + hi)
        first = max((hi - lo) * depth, 1e-300)
        left = _march(lo, mid, width, first, grow)
        right = _march(hi, mid, width, first, grow)
        out.extend(left[1:])
        out.extend(reversed(right[:-1]))
    return np.asarray(out)


def panel_nodes(edges: np.ndarray, m: int) -> tuple[np.ndarray, np.ndarray]:
    """Flattened nodes and weights of the m-point rule on every panel."""
    x, w = gauss_legendre(m)
    half = 0.5 * np.diff(edges)
    mid = 0.5 * (edges[1:] + edges[:-1])
    nodes = mid[:, None] + half[:, None] * x[None, :]
    weights = half[:, None] * w[None, :]
    return nodes.ravel(), weights.ravel()


def integrate_edges(f: Callable, edges: np.ndarray) -> tuple[float, float]:
    """(value, error estimate) from two Gauss-Legendre orders on the same panels."""
    vals = []
    for m in (HI_ORDER, LO_ORDER):
        x, w = panel_nodes(edges, m)
        vals.append(math.fsum(w * f(x)))
    return vals[0], abs(vals[0] - vals[1])


def _asymptotic_tail(power: float, omega: float, Z: float,
                     max_terms: int = 60) -> tuple[complex, float]:
    z = 1j / (omega * Z)
    total, term = 0j, 1.0 + 0j
    err = math.inf
    for k in range(max_terms):
        total += term
        nxt = term * (power - k) * z
        if abs(nxt) >= abs(term) and k > 0:
            err = abs(term)
            break
        term = nxt
        if abs(term) < 1e-18 * abs(total):
            err = abs(term)
            break
    pref = 1j * np.exp(1j * omega * Z) / omega * Z**power
    return complex(pref * total), float(abs(pref) * err)


def oscillatory_power_tail(power: float, omega: float, Z: float) -> tuple[complex, float]:
    """Integral of exp(i*w*u) * u**p over (Z, inf), Abel-regularized when p >= 0.

    Returns the complex value and an error estimate. When w*Z is large the
    integration-by-parts series is used directly; otherwise the integral is
    rescaled to v = |w| u, integrated by quadrature up to a point where the
    series is accurate, and completed by the series.
    """
    if omega < 0:
        v, e = oscillatory_power_tail(power, -omega, Z)
        return v.conjugate(), e
    safe = 40.0 * (1 + abs(power))
    y = omega * Z
    if y >= safe:
        return _asymptotic_tail(power, omega, Z)
    edges = panel_edges(y, safe, math.pi, [y])
    x, w = panel_nodes(edges, HI_ORDER)
    xl, wl = panel_nodes(edges, LO_ORDER)
    hi = np.sum(w * np.exp(1j * x) * x**power)
    lo = np.sum(wl * np.exp(1j * xl) * xl**power)
    tv, te = _asymptotic_tail(power, 1.0, safe)
    scale = omega ** (-power - 1)
    return complex(scale * (hi + tv)), float(scale * (abs(hi - lo) + te))


def power_tail(terms: Sequence[TailTerm], Z: float,
               policy: TailPolicy = TailPolicy.POWER_EXTRAPOLATE) -> tuple[float, float]:
    """Integral of a sum of TailTerms over (Z, inf) and its error."""
    value, err = 0.0, 0.0
    for t in terms:
        c = complex(t.coeff)
        if t.omega == 0.0:
            if c.real == 0.0:
                continue
            if t.power >= -1.0:
                raise DivergenceError(f"non-oscillatory tail u^{t.power} is not integrable")
            value += -c.real * Z ** (t.power + 1) / (t.power + 1)
            continue
        if policy is TailPolicy.ENVELOPE:
            if t.power > 0:
                raise DivergenceError(f"oscillatory tail u^{t.power} has growing amplitude")
            err += 2 * abs(c) * Z**t.power / abs(t.omega)
        else:
            v, e = oscillatory_power_tail(t.power, t.omega, Z)
            value += (c * v).real
            err += abs(c) * e
    return value, err


def required_cutoff(terms: Sequence[TailTerm], factor: float = 40.0) -> float:
    """Cutoff above which every oscillatory asymptotic series is well converged."""
    z = 0.0
    for t in terms:
        if t.omega != 0.0:
            z = max(z, factor * (1 + abs(t.power)) / abs(t.omega))
    return z


def integrate_half_line(f: Callable, tail: Sequence[TailTerm], q: QuadratureSpec = DEFAULT_SPEC,
                        *, omega_max: float = 0.0, valid_from: float = 0.0,
                        singular: Sequence[float] = (), scale: float = 1.0,
                        remainder_bound: Callable[[float], float] | None = None,
                        abs_floor: float = 0.0) -> QuadResult:
    """Integrate ``f`` over (0, inf).

    ``f`` must coincide with the sum of ``tail`` terms for u >= ``valid_from``,
    up to a remainder whose integral over (Z, inf) is bounded by
    ``remainder_bound(Z)``. ``omega_max`` is the largest angular frequency
    of ``f`` and caps panel widths; ``scale`` is the length scale of
    non-oscillatory features and sets the minimum cutoff together with
    ``q.frequency_cutoff``.
    """
    Z = max(valid_from * 1.0000001, q.frequency_cutoff * scale,
            2.0 * max(singular, default=0.0))
    width = 2 * math.pi / omega_max if omega_max > 0 else math.inf
    refine = 0
    est = math.nan
    while True:
        if Z / (width / 2**refine) > q.max_subdivisions:
            raise AccuracyError("panel budget exhausted", est)
        edges = panel_edges(0.0, Z, width / 2**refine, [0.0, *singular])
        if edges.size - 1 > q.max_subdivisions:
            raise AccuracyError("panel budget exhausted", est)
        body, body_err = integrate_edges(f, edges)
        tail_val, tail_err = power_tail(tail, Z, q.tail_policy)
        rem = remainder_bound(Z) if remainder_bound is not None else 0.0
        value = body + tail_val
        est = body_err + tail_err + rem
        target = q.tolerance * abs(value) + abs_floor
        if est <= target:
            return QuadResult(value, est, edges.size - 1)
        if tail_err + rem > 0.5 * target:
            Z *= 4.0
        elif refine < 4:
            refine += 1
        else:
            Z *= 2.0


def integrate_interval(f: Callable, a: float, b: float, q: QuadratureSpec = DEFAULT_SPEC,
                       *, omega_max: float = 0.0, singular: Sequence[float] = (),
                       abs_floor: float = 0.0) -> QuadResult:
    """Integrate ``f`` over [a, b] with grading towards the ends and ``singular``."""
    width = 2 * math.pi / omega_max if omega_max > 0 else math.inf
    est = math.nan
    for refine in range(8):
        if (b - a) / (width / 2**refine) > q.max_subdivisions:
            break
        edges = panel_edges(a, b, width / 2**refine, singular)
        if edges.size - 1 > q.max_subdivisions:
            break
        value, est = integrate_edges(f, edges)
        if est <= q.tolerance * abs(value) + abs_floor:
            return QuadResult(value, est, edges.size - 1)
        width = min(width, (b - a) / 4) if math.isinf(width) else width
    raise AccuracyError("interval quadrature did not converge", est)
