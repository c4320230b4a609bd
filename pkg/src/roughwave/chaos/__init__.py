"""Chaos kernels, index sets, norms, explicit bounds and the existence probe."""

from .bounds import BetaExponents, J_integral, beta_exponents, chaos_norm_upper_bound, log_upper_bounds
from .indices import AlphaIndex, alpha_index_set, generating_polynomial, monomial_sum, twos_histogram
from .kernels import chaos_kernel_hat
from .norms import ChaosOrderResult, Method, chaos_integrand, chaos_norm_monte_carlo, chaos_norm_white
from .probe import (
    KernelPrimitive,
    ProbeResult,
    analytic_threshold_verdict,
    probe_exponents,
    second_chaos_divergence_probe,
)

__all__ = [
    "AlphaIndex",
    "BetaExponents",
    "ChaosOrderResult",
    "J_integral",
    "KernelPrimitive",
    "Method",
    "ProbeResult",
    "alpha_index_set",
    "analytic_threshold_verdict",
    "beta_exponents",
    "chaos_integrand",
    "chaos_kernel_hat",
    "chaos_norm_monte_carlo",
    "chaos_norm_upper_bound",
    "chaos_norm_white",
    "generating_polynomial",
    "log_upper_bounds",
    "monomial_sum",
    "probe_exponents",
    "second_chaos_divergence_probe",
    "twos_histogram",
]
