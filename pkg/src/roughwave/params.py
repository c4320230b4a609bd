"""Model parameters, regime classification and closed-form exponents."""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

from .errors import ParameterDomainError, RegimeError

# Parameters within this distance of the critical line kappa = 3 - 4H are
# treated as lying on it.
BOUNDARY_TOL = 1e-12


class TemporalKind(str, enum.Enum):
    WHITE = "white"
    COLORED = "colored"


class Equation(str, enum.Enum):
    WAVE = "wave"
    HEAT = "heat"


class Regime(str, enum.Enum):
    WAVE_SOLVABLE = "WaveSolvable"
    WAVE_NON_SOLVABLE = "WaveNonSolvable"
    HEAT_SOLVABLE = "HeatSolvable"
    HEAT_NON_SOLVABLE = "HeatNonSolvable"

    @property
    def solvable(self) -> bool:
        return self in (Regime.WAVE_SOLVABLE, Regime.HEAT_SOLVABLE)


def _check_ranges(kappa, hurst_space, hurst_time, kind) -> None:
    if not (isinstance(kappa, (int, float)) and 0.0 < kappa <= 2.0):
        raise ParameterDomainError("kappa", kappa, "must lie in (0, 2]")
    if not (isinstance(hurst_space, (int, float)) and 0.0 < hurst_space < 1.0):
        raise ParameterDomainError("hurst_space", hurst_space, "must lie in (0, 1)")
    if not (isinstance(hurst_time, (int, float)) and 0.5 <= hurst_time < 1.0):
        raise ParameterDomainError("hurst_time", hurst_time, "must lie in [1/2, 1)")
    white = hurst_time == 0.5
    if (kind is TemporalKind.WHITE) != white:
        raise ParameterDomainError(
            "temporal_kind", kind.value, "white noise in time is equivalent to hurst_time = 1/2"
        )


@dataclass(frozen=True)
class ModelParams:
    """Parameters of the fractional stochastic wave equation in one space dimension.

    ``temporal_kind`` defaults to the kind implied by ``hurst_time``.
    ``equation`` selects the wave model (default) or the heat comparison
    regime, for which only exponents are available.
    """

    kappa: float
    hurst_space: float
    hurst_time: float = 0.5
    temporal_kind: TemporalKind | None = None
    equation: Equation = Equation.WAVE

    def __post_init__(self):
        kind = self.temporal_kind
        if kind is None:
            kind = TemporalKind.WHITE if self.hurst_time == 0.5 else TemporalKind.COLORED
        else:
            kind = TemporalKind(kind)
        object.__setattr__(self, "temporal_kind", kind)
        object.__setattr__(self, "equation", Equation(self.equation))
        _check_ranges(self.kappa, self.hurst_space, self.hurst_time, kind)

    @property
    def is_white(self) -> bool:
        return self.temporal_kind is TemporalKind.WHITE


@dataclass(frozen=True)
class ExponentSet:
    growth: float
    p_factor: float
    holder_time_sup: float
    holder_space_sup: float
    chaos_series_power: float


@dataclass(frozen=True)
class ValidatedParams:
    params: ModelParams
    regime: Regime

    @property
    def kappa(self) -> float:
        return self.params.kappa

    @property
    def hurst_space(self) -> float:
        return self.params.hurst_space

    @property
    def hurst_time(self) -> float:
        return self.params.hurst_time

    @property
    def is_white(self) -> bool:
        return self.params.is_white

    def require(self, regime: Regime = Regime.WAVE_SOLVABLE) -> "ValidatedParams":
        if self.regime is not regime:
            raise RegimeError(f"requires {regime.value}, got {self.regime.value}")
        return self


def critical_kappa(hurst_space: float) -> float:
    """Smallest order of the fractional Laplacian (exclusive) for solvability."""
    return 3.0 - 4.0 * hurst_space


def classify(p: ModelParams) -> Regime:
    kappa, H, H0 = p.kappa, p.hurst_space, p.hurst_time
    if p.equation is Equation.HEAT:
        ok = 0.0 < H < 0.5 and H0 + H > 0.75
        return Regime.HEAT_SOLVABLE if ok else Regime.HEAT_NON_SOLVABLE
    ok = 0.25 < H < 0.5 and kappa > critical_kappa(H) + BOUNDARY_TOL and 0.5 <= H0 < 1.0
    return Regime.WAVE_SOLVABLE if ok else Regime.WAVE_NON_SOLVABLE


def validate_params(p: ModelParams) -> ValidatedParams:
    """Re-check field ranges and classify the solvability regime."""
    kind = TemporalKind(p.temporal_kind) if p.temporal_kind is not None else None
    _check_ranges(p.kappa, p.hurst_space, p.hurst_time,
                  kind or (TemporalKind.WHITE if p.hurst_time == 0.5 else TemporalKind.COLORED))
    return ValidatedParams(p, classify(p))


def as_validated(p: ModelParams | ValidatedParams) -> ValidatedParams:
    return p if isinstance(p, ValidatedParams) else validate_params(p)


def exponents(p: ValidatedParams) -> ExponentSet:
    """Closed-form growth, moment-order, Hölder and series exponents.

    Fields that have no meaning for the heat regime are NaN.
    """
    if not p.regime.solvable:
        raise RegimeError(f"exponents undefined in regime {p.regime.value}")
    kappa, H, H0 = p.kappa, p.hurst_space, p.hurst_time
    if p.regime is Regime.HEAT_SOLVABLE:
        growth = (2 * H0 + H - 1) / H
        out = ExponentSet(growth, math.nan, math.nan, math.nan, H)
    else:
        denom = 3 * kappa - 4 + 4 * H
        growth = (2 * kappa * H0 + 2 * (kappa - 2) + 4 * H) / denom
        c = (1 - 2 / kappa) + 2 * H / kappa
        out = ExponentSet(
            growth=growth,
            p_factor=kappa / denom,
            holder_time_sup=1 - 2 / kappa + 2 * H / kappa,
            holder_space_sup=H + kappa / 2 - 1,
            chaos_series_power=2 * c + 1,
        )
        if not (out.holder_time_sup > 0 and out.holder_space_sup > 0):
            raise RuntimeError("Hölder suprema must be positive in the solvable regime")
    if H0 == 0.5 and not math.isclose(growth, 1.0, rel_tol=1e-12):
        raise RuntimeError(f"growth exponent {growth} should equal 1 for white time")
    return out
