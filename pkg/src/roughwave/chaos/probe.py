"""Numerical check of the existence threshold through the second chaos.

The probe evaluates the frequency-truncated integral

    I(Xi) = int_{0<s1<s2<t} int_0^Xi int_0^Xi
            sin^2((s2-s1) a^(k/2)) / a^k * a^(2(1-2H))
            * sin^2((t-s2) b^(k/2)) / b^k  da db ds

which stays bounded as Xi -> inf exactly when k > 3 - 4H. After x = eta^(k/2)
and a scaling of each frequency by its time gap, both frequency integrals
become primitives of a fixed kernel:

    S(p, Y) = int_0^Y sin^2(v) v^p dv
    R(p, Y) = int_0^Y (1/2 - sin(2v)/(4v)) v^p dv

and I(Xi) is a single integral over the gap sigma = s2 - s1 of
A(sigma) * B(t - sigma), where A comes from S with p = (2/k)(3-4H) - 3 and
B, already integrated over s2, comes from R with p = 2/k - 3. Increments
between successive cutoffs are computed directly from differences of the
primitives, so slowly decaying increments are resolved without cancellation.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from ..errors import InputError, ParameterDomainError, UnsupportedError
from ..params import ModelParams, ValidatedParams
from ..quadrature import HI_ORDER, LO_ORDER, gauss_legendre, panel_edges, panel_nodes
from ..verdicts import Convergence

RATIO_DELTA = 0.05
# increments decaying slower than Xi^-0.01 are read as unbounded growth
LOG_RATE_FLOOR = 0.01
DEFAULT_CUTOFFS = tuple(1e2 * 4.0**k for k in range(48))
MAX_KAPPA = 4.0

_SERIES_END = 0.5
_SERIES_TERMS = 14
_ASYMPTOTIC_TERMS = 30


class KernelPrimitive:
    """Y -> int_0^Y g(v) v^p dv for g(v) = sin^2(v) or 1/2 - sin(2v)/(4v).

    Both kernels are even power series sum_k c_k v^(2k) near zero and equal
    1/2 + Re(b exp(2iv)) v^m for large v, which gives exact series near zero,
    a cumulative Gauss-Legendre table in between, and an asymptotic expansion
    of the oscillatory part beyond the table.
    """

    def __init__(self, kind: str, power: float):
        if kind not in ("sin2", "step"):
            raise ValueError(f"unknown kernel {kind!r}")
        if not power > -3.0:
            raise ValueError("kernel primitive needs power > -3")
        self.kind = kind
        self.p = float(power)
        k = np.arange(1, _SERIES_TERMS + 1)
        fact = [math.factorial(2 * j + (1 if kind == "step" else 0)) for j in k]
        self._coef = np.array([(-1.0) ** (j + 1) * 2.0 ** (2 * j - 1) / f for j, f in zip(k, fact)])
        self._expo = self.p + 2 * k + 1
        # large-v form: 1/2 v^p + Re(b exp(2iv)) v^m
        if kind == "sin2":
            self._b, self._m = -0.5 + 0j, self.p
        else:
            self._b, self._m = 0.25j, self.p - 1
        self.y0 = max(100.0, 2.0 * (abs(self._m) + _ASYMPTOTIC_TERMS))
        self._edges = panel_edges(_SERIES_END, self.y0, 0.5)
        x, w = panel_nodes(self._edges, HI_ORDER)
        per_panel = (w * self.kernel(x)).reshape(-1, HI_ORDER).sum(axis=1)
        self._cum = self._series(np.array([_SERIES_END]))[0] + np.concatenate([[0.0], np.cumsum(per_panel)])
        self._t0 = self._osc_tail(np.array([self.y0]))[0]

    def kernel(self, v: np.ndarray) -> np.ndarray:
        v = np.asarray(v, dtype=float)
        if self.kind == "sin2":
            g = np.sin(v) ** 2
        else:
            g = 0.5 - np.sin(2 * v) / (4 * v)
        return g * v**self.p

    def _series(self, y: np.ndarray) -> np.ndarray:
        y = np.asarray(y, dtype=float)
        return (self._coef / self._expo * y[..., None] ** self._expo).sum(axis=-1)

    def _table(self, y: np.ndarray) -> np.ndarray:
        j = np.clip(np.searchsorted(self._edges, y, side="right") - 1, 0, self._edges.size - 2)
        a = self._edges[j]
        x, w = gauss_legendre(HI_ORDER)
        half = 0.5 * (y - a)
        nodes = a[:, None] + half[:, None] * (x[None, :] + 1)
        return self._cum[j] + half * (w[None, :] * self.kernel(nodes)).sum(axis=1)

    def _osc_tail(self, y: np.ndarray) -> np.ndarray:
        """Complex int_Y^inf exp(2iv) v^m dv (Abel sense), by integration by parts."""
        z = 0.5j / y
        term = np.ones_like(z)
        total = np.zeros_like(z)
        for k in range(_ASYMPTOTIC_TERMS):
            total = total + term
            term = term * (self._m - k) * z
        return 0.5j * np.exp(2j * y) * y**self._m * total

    def _powint(self, ya: np.ndarray, yb: np.ndarray) -> np.ndarray:
        mu = self.p + 1
        log_ratio = np.log(yb / ya)
        if mu == 0.0:
            return log_ratio
        return ya**mu * np.expm1(mu * log_ratio) / mu

    def _large(self, ya: np.ndarray, yb: np.ndarray) -> np.ndarray:
        osc = self._osc_tail(ya) - self._osc_tail(yb)
        return 0.5 * self._powint(ya, yb) + (self._b * osc).real

    def __call__(self, y) -> np.ndarray:
        y = np.asarray(y, dtype=float)
        out = np.empty_like(y)
        lo = y <= _SERIES_END
        hi = y >= self.y0
        mid = ~(lo | hi)
        out[lo] = self._series(y[lo])
        out[mid] = self._table(y[mid])
        out[hi] = self._cum[-1] + self._large(np.full(hi.sum(), self.y0), y[hi])
        return out

    def increment(self, ya, yb) -> np.ndarray:
        """int_ya^yb g(v) v^p dv for ya <= yb, without subtracting large values."""
        ya, yb = np.broadcast_arrays(np.asarray(ya, dtype=float), np.asarray(yb, dtype=float))
        out = np.empty_like(ya)
        small = yb <= _SERIES_END
        large = ya >= self.y0
        other = ~(small | large)
        out[small] = (self._coef / self._expo
                      * (yb[small, None] ** self._expo - ya[small, None] ** self._expo)).sum(axis=-1)
        out[large] = self._large(ya[large], yb[large])
        out[other] = self(yb[other]) - self(ya[other])
        return out


def probe_exponents(kappa: float, H: float) -> tuple[float, float]:
    """Powers of the two kernel primitives: the rough-weighted and the plain one."""
    g = 2.0 / kappa
    return g * (3 - 4 * H) - 3, g - 3


def analytic_threshold_verdict(kappa: float, H: float) -> Convergence:
    """Endpoint analysis: both primitives stay bounded iff their powers are below -1."""
    p1, p2 = probe_exponents(kappa, H)
    ok = p1 < -1 and p2 < -1
    return Convergence.CONVERGENT if ok else Convergence.DIVERGENT


@dataclass(frozen=True)
class ProbeResult:
    kappa: float
    hurst_space: float
    t: float
    cutoffs: tuple
    values: tuple
    increments: tuple
    ratios: tuple
    decay_rate: float
    growth: float
    verdict: Convergence
    analytic_verdict: Convergence
    quadrature_error: float


def _unpack(p) -> tuple[float, float]:
    if isinstance(p, ValidatedParams):
        p = p.params
    if isinstance(p, ModelParams):
        if not p.is_white:
            raise UnsupportedError("the divergence probe is implemented for white time only")
        kappa, H = p.kappa, p.hurst_space
    else:
        kappa, H = (float(v) for v in p)
    if not 0.0 < H < 0.5:
        raise ParameterDomainError("hurst_space", H, "must lie in (0, 1/2)")
    if not 0.0 < kappa < MAX_KAPPA:
        raise ParameterDomainError("kappa", kappa, f"must lie in (0, {MAX_KAPPA})")
    return kappa, H


def _gap_nodes(t: float, x_max: float, m: int) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Nodes on (0, t) as (sigma, t - sigma, weight), each computed without rounding
    loss next to its own endpoint."""
    depth = min(1e-6, 1e-3 / (t * x_max))
    levels = int(math.ceil(math.log2(1 / depth)))
    edges = np.concatenate([[0.0], 0.5 * t * 2.0 ** -np.arange(levels, -1, -1)])
    near, w = panel_nodes(edges, m)
    far = t - near
    return np.concatenate([near, far]), np.concatenate([far, near]), np.concatenate([w, w])


def second_chaos_divergence_probe(p, t: float = 1.0,
                                  cutoffs: Sequence[float] | None = None) -> ProbeResult:
    """Truncated second-chaos lower-bound integral over a sequence of cutoffs.

    Divergent if the last two ratios I(Xi_{k+1})/I(Xi_k) exceed 1 + 0.05, or
    if the last increment decays slower than Xi^-0.01 (logarithmic growth);
    Convergent otherwise. ``p`` is ModelParams, ValidatedParams or a pair
    (kappa, H); kappa may exceed 2 here since only the kernel matters.
    """
    kappa, H = _unpack(p)
    cut = np.asarray(DEFAULT_CUTOFFS if cutoffs is None else cutoffs, dtype=float)
    if cut.size < 3 or not np.all(np.diff(cut) > 0) or cut[0] <= 0:
        raise InputError("cutoffs must be at least three increasing positive values")
    if not t > 0:
        raise InputError("t must be positive")
    g = 2.0 / kappa
    p1, p2 = probe_exponents(kappa, H)
    S = KernelPrimitive("sin2", p1)
    R = KernelPrimitive("step", p2)
    X = cut ** (kappa / 2)

    def pieces(m):
        sig, u, w = _gap_nodes(t, X[-1], m)
        a_scale = g * sig ** (-p1 - 1)
        b_scale = g * u ** (-p2)
        first = math.fsum(w * a_scale * S(sig * X[0]) * b_scale * R(u * X[0]))
        incs = []
        for xa, xb in zip(X[:-1], X[1:]):
            da = a_scale * S.increment(sig * xa, sig * xb)
            db = b_scale * R.increment(u * xa, u * xb)
            a_old = a_scale * S(sig * xa)
            b_new = b_scale * R(u * xb)
            incs.append(math.fsum(w * (da * b_new + a_old * db)))
        return first, np.array(incs)

    first, incs = pieces(HI_ORDER)
    first_lo, incs_lo = pieces(LO_ORDER)
    values = first + np.concatenate([[0.0], np.cumsum(incs)])
    values_lo = first_lo + np.concatenate([[0.0], np.cumsum(incs_lo)])
    ratios = values[1:] / values[:-1]
    with np.errstate(divide="ignore", invalid="ignore"):
        rate = -np.log(incs[-1] / incs[-2]) / np.log(cut[-1] / cut[-2]) if incs.size >= 2 else math.nan
    divergent = bool(np.all(ratios[-2:] > 1 + RATIO_DELTA)) or not (rate > LOG_RATE_FLOOR)
    verdict = Convergence.DIVERGENT if divergent else Convergence.CONVERGENT
    return ProbeResult(
        kappa=kappa, hurst_space=H, t=float(t),
        cutoffs=tuple(cut.tolist()), values=tuple(values.tolist()),
        increments=tuple(incs.tolist()), ratios=tuple(ratios.tolist()),
        decay_rate=float(rate), growth=float(values[-1] - values[0]),
        verdict=verdict, analytic_verdict=analytic_threshold_verdict(kappa, H),
        quadrature_error=float(np.max(np.abs(values - values_lo))),
    )
