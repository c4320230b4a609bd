import itertools
import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy.special import gammaln

from roughwave.chaos import (
    AlphaIndex,
    J_integral,
    Method,
    alpha_index_set,
    beta_exponents,
    chaos_kernel_hat,
    chaos_norm_monte_carlo,
    chaos_norm_upper_bound,
    chaos_norm_white,
    generating_polynomial,
    log_upper_bounds,
    monomial_sum,
    twos_histogram,
)
from roughwave.chaos.indices import log_weighted_index_sums
from roughwave.errors import CapacityError, InputError, PreconditionError, RegimeError, UnsupportedError
from roughwave.greens import green_hat
from roughwave.params import ModelParams, validate_params


def _brute_force_indices(n):
    # expand x1 * prod (x_j + x_{j-1}) term by term
    out = set()
    for picks in itertools.product((0, 1), repeat=n - 1):
        e = [0] * n
        e[0] = 1
        for j, back in enumerate(picks, start=1):
            e[j - back] += 1
        out.add(tuple(e))
    return out


def test_index_examples():
    assert {a.entries for a in alpha_index_set(1)} == {(1,)}
    assert {a.entries for a in alpha_index_set(2)} == {(1, 1), (2, 0)}
    three = alpha_index_set(3)
    assert len(three) == 4
    for a in three:
        assert sum(a) == 3 and a.entries[0] in (1, 2) and a.entries[-1] in (0, 1)


@pytest.mark.parametrize("n", range(1, 9))
def test_index_set_matches_expansion(n):
    idx = alpha_index_set(n)
    assert len(idx) == 2 ** (n - 1)
    assert {a.entries for a in idx} == _brute_force_indices(n)


def test_index_set_limits():
    with pytest.raises(InputError):
        alpha_index_set(0)
    with pytest.raises(CapacityError):
        alpha_index_set(40)
    with pytest.raises(InputError):
        AlphaIndex((0, 2))


@pytest.mark.parametrize("n", range(1, 7))
def test_generating_polynomial_identity(n):
    x = np.random.default_rng(n).uniform(0.01, 3.0, size=(2000, n))
    lhs = monomial_sum(alpha_index_set(n), x)
    rhs = generating_polynomial(x)
    np.testing.assert_allclose(lhs, rhs, rtol=1e-12)


@pytest.mark.parametrize("n", range(1, 12))
def test_twos_histogram(n):
    counts: dict[int, int] = {}
    for a in alpha_index_set(n):
        counts[a.twos] = counts.get(a.twos, 0) + 1
    assert twos_histogram(n) == dict(sorted(counts.items()))


def test_weighted_index_sums_against_enumeration():
    log_w = (math.log(0.7), math.log(1.3), math.log(2.9))
    got = log_weighted_index_sums(log_w, 8)
    for n in range(1, 9):
        brute = sum(math.exp(sum(log_w[a] for a in idx)) for idx in alpha_index_set(n))
        assert got[n - 1] == pytest.approx(math.log(brute), rel=1e-13)


def test_kernel_example():
    val = chaos_kernel_hat(2, [0.2, 0.7], [1.0, -1.0], 1.0, 0.0, 2.0)
    expected = 0.5 * green_hat(0.5, 1.0, 2.0) * green_hat(0.3, 0.0, 2.0)
    assert val == pytest.approx(expected, rel=1e-15)
    assert expected == pytest.approx(0.5 * math.sin(0.5) * 0.3)


def test_kernel_preconditions_and_symmetrization():
    with pytest.raises(PreconditionError):
        chaos_kernel_hat(2, [0.7, 0.2], [1.0, 2.0], 1.0, 0.0, 2.0)
    a = chaos_kernel_hat(2, [0.7, 0.2], [2.0, 1.0], 1.0, 0.3, 1.8, sort=True)
    b = chaos_kernel_hat(2, [0.2, 0.7], [1.0, 2.0], 1.0, 0.3, 1.8)
    assert a == b


def test_J_zero_is_pi(white_03):
    assert J_integral(0, white_03) == pytest.approx(math.pi, rel=1e-10)


def test_J_against_scipy(white_03):
    from scipy import integrate
    # a = 1 gives exponent 0.4 for kappa = 2, H = 0.3
    f = lambda u: math.sin(u) ** 2 * u ** (0.4 - 2)
    head = integrate.quad(f, 0, 1, epsrel=1e-12)[0]
    body = integrate.quad(f, 1, 2000, limit=5000, epsrel=1e-12)[0]
    tail = 0.5 * 2000 ** (0.4 - 1) / (1 - 0.4)  # mean of sin^2 beyond the cutoff
    assert J_integral(1, white_03) == pytest.approx(2 * (head + body + tail), rel=2e-5)


def test_first_order_closed_form(white_03):
    # n = 1, kappa = 2: 2 int_0^1 s^0.6 ds * int_0^inf sin^2 u u^-1.6 du
    D1 = math.gamma(0.4) * math.cos(0.3 * math.pi) / 0.6
    res = chaos_norm_white(1, 1.0, white_03)
    assert res.method is Method.QUADRATURE
    assert res.value == pytest.approx(2**0.6 * D1 / 1.6, rel=1e-9)


@pytest.mark.parametrize("n", [1, 2])
def test_quadrature_and_monte_carlo_agree(white_03, n):
    q = chaos_norm_white(n, 1.0, white_03)
    mc = chaos_norm_white(n, 1.0, white_03, method=Method.MONTE_CARLO, samples=1 << 19, seed=3)
    assert abs(q.value - mc.value) <= q.error_estimate + mc.error_estimate


def test_zero_horizon(white_03):
    for n in (1, 2, 3):
        assert chaos_norm_white(n, 0.0, white_03).value == 0.0
    assert chaos_norm_upper_bound(2, 0.0, white_03) == 0.0


def test_chaos_norm_time_scaling(white_045):
    # s -> t s and xi -> xi t^(-2/k) give t^(3 - (4/k)(1 - H)) per order
    a = chaos_norm_white(2, 1.0, white_045).value
    b = chaos_norm_white(2, 2.0, white_045).value
    assert b / a == pytest.approx(2 ** (2 * (3 - 2 * 0.55)), rel=1e-12)


def test_second_order_off_kappa_two():
    vp = validate_params(ModelParams(1.9, 0.35))
    q = chaos_norm_white(2, 2.0, vp)
    mc = chaos_norm_white(2, 2.0, vp, method=Method.MONTE_CARLO, samples=1 << 19, seed=8)
    assert abs(q.value - mc.value) <= q.error_estimate + mc.error_estimate


def test_monte_carlo_is_reproducible(white_03):
    a = chaos_norm_monte_carlo(3, 1.0, white_03, samples=1 << 16, seed=99)
    b = chaos_norm_monte_carlo(3, 1.0, white_03, samples=1 << 16, seed=99)
    assert a == b


def test_colored_noise_rejected():
    p = validate_params(ModelParams(2.0, 0.3, 0.75))
    with pytest.raises(UnsupportedError):
        chaos_norm_white(1, 1.0, p)


def test_bound_needs_solvable():
    with pytest.raises(RegimeError):
        chaos_norm_upper_bound(1, 1.0, ModelParams(1.8, 0.3))


def _bound_by_enumeration(n, t, vp):
    kappa, H, H0 = vp.kappa, vp.hurst_space, vp.hurst_time
    total = 0.0
    for alpha in alpha_index_set(n):
        be = beta_exponents(alpha, vp)
        term = (2 / kappa) ** (n / (2 * H0))
        for a, b in zip(alpha, be.betas):
            term *= J_integral(a, vp) ** (1 / (2 * H0)) * math.gamma(1 + b)
        term *= t ** (n + be.total) / math.exp(gammaln(n + 1 + be.total))
        total += term
    return math.factorial(n) ** (2 * H0 - 1) * total ** (2 * H0)


@pytest.mark.parametrize("H0", [0.5, 0.75])
@pytest.mark.parametrize("n", [1, 3, 5])
def test_upper_bound_against_enumeration(n, H0):
    vp = validate_params(ModelParams(2.0, 0.3, H0))
    assert chaos_norm_upper_bound(n, 1.7, vp) == pytest.approx(_bound_by_enumeration(n, 1.7, vp), rel=1e-12)


@pytest.mark.parametrize("t", [0.5, 1.0, 2.0])
def test_first_order_bound_is_attained(white_03, t):
    assert chaos_norm_white(1, t, white_03).value == pytest.approx(chaos_norm_upper_bound(1, t, white_03), rel=1e-8)


@settings(max_examples=20, deadline=None)
@given(st.floats(0.26, 0.49), st.floats(0.1, 5.0))
def test_log_bounds_finite_and_summable(H, t):
    vp = validate_params(ModelParams(2.0, H))
    lb = log_upper_bounds(400, t, vp)
    assert np.all(np.isfinite(lb))
    # eventually decreasing: factorial decay dominates
    assert lb[-1] < lb[-2]


@pytest.mark.parametrize("n", range(9, 13))
def test_index_set_cardinality_large(n):
    assert len(alpha_index_set(n)) == 2 ** (n - 1)


@pytest.mark.parametrize("n", range(1, 6))
def test_triangle_bound_pointwise(n):
    # prod |eta_j - eta_{j-1}|^(1-2H) <= sum_alpha prod |eta_j|^(alpha_j (1-2H))
    H = 0.3
    rng = np.random.default_rng(100 + n)
    eta = rng.standard_cauchy((10_000, n))
    steps = np.diff(np.concatenate([np.zeros((10_000, 1)), eta], axis=1), axis=1)
    lhs = np.prod(np.abs(steps) ** (1 - 2 * H), axis=1)
    rhs = monomial_sum(alpha_index_set(n), np.abs(eta) ** (1 - 2 * H))
    assert np.all(lhs <= rhs * (1 + 1e-12))


def test_J_boundary_diverges():
    from roughwave.errors import DivergenceError
    with pytest.raises(DivergenceError):
        J_integral(2, ModelParams(2.0, 0.25))


def test_J_monotone_in_a(white_03):
    # observed ordering for kappa = 2, H = 0.3
    vals = [J_integral(a, white_03) for a in (0, 1, 2)]
    assert vals[0] < vals[1] < vals[2]


def test_first_order_bound_formula(white_03):
    kappa, H = 2.0, 0.3
    b1 = 2 - 2 / kappa - (2 / kappa) * (1 - 2 * H)
    t = 1.3
    expected = (2 / kappa) * J_integral(1, white_03) * math.gamma(1 + b1) * t ** (1 + b1) / math.gamma(2 + b1)
    assert chaos_norm_upper_bound(1, t, white_03) == pytest.approx(expected, rel=1e-13)


@pytest.mark.parametrize("n", [1, 2, 5])
def test_bound_power_law_in_t(white_045, n):
    kappa, H = 2.0, 0.45
    slope = n * (1 + 2 * ((1 - 2 / kappa) + 2 * H / kappa))
    ratio = chaos_norm_upper_bound(n, 2.0, white_045) / chaos_norm_upper_bound(n, 1.0, white_045)
    assert math.log2(ratio) == pytest.approx(slope, rel=1e-12)
