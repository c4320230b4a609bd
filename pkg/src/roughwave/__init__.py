"""Numerics for the stochastic wave equation with a fractional Laplacian and rough spatial noise."""

__version__ = "0.1.0"

from .errors import (  # noqa: E402
    AccuracyError,
    InputError,
    ParameterDomainError,
    RegimeError,
    RoughWaveError,
    TruncationError,
    UnsupportedError,
)
from .greens import green_hat, green_wave_1d  # noqa: E402
from .noise import c_H, fbm_sine_identity, spectral_density  # noqa: E402
from .params import (  # noqa: E402
    Equation,
    ExponentSet,
    ModelParams,
    Regime,
    ValidatedParams,
    critical_kappa,
    exponents,
    validate_params,
)
from .quadrature import QuadratureSpec, TailPolicy  # noqa: E402

__all__ = [
    "AccuracyError", "InputError", "ParameterDomainError", "RegimeError", "RoughWaveError",
    "TruncationError", "UnsupportedError", "green_hat", "green_wave_1d", "c_H",
    "fbm_sine_identity", "spectral_density", "Equation", "ExponentSet", "ModelParams", "Regime",
    "ValidatedParams", "critical_kappa", "exponents", "validate_params", "QuadratureSpec",
    "TailPolicy", "__version__",
]
