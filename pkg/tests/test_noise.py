import math

import mpmath as mp
import pytest
from hypothesis import given, settings, strategies as st

from roughwave.errors import ParameterDomainError, SingularityError, UnsupportedError
from roughwave.noise import (
    TemporalKernel,
    c_H,
    fbm_sine_identity,
    sine_product_rhs,
    spectral_density,
    temporal_kernel_value,
)
from roughwave.params import TemporalKind


def test_normalizing_constant():
    assert c_H(0.5) == pytest.approx(1 / (2 * math.pi), rel=1e-15)
    expected = mp.gamma(1.5) * mp.sin(mp.pi / 4) / (2 * mp.pi)
    assert c_H(0.25) == pytest.approx(float(expected), rel=1e-14)
    assert c_H(0.25) == pytest.approx(0.099736, abs=1e-6)
    with pytest.raises(ParameterDomainError):
        c_H(1.0)


def test_spectral_density():
    assert spectral_density(1.0, 0.37) == 1.0
    assert spectral_density(4.0, 0.25) == pytest.approx(2.0)
    assert spectral_density(0.0, 0.3) == 0.0
    assert spectral_density(-4.0, 0.25) == pytest.approx(2.0)


def test_temporal_kernel():
    k = TemporalKernel(TemporalKind.COLORED, 0.75)
    assert temporal_kernel_value(1.0, k) == 1.0
    assert temporal_kernel_value(4.0, k) == pytest.approx(0.5)
    assert temporal_kernel_value(-4.0, k) == pytest.approx(0.5)
    with pytest.raises(SingularityError):
        temporal_kernel_value(0.0, k)
    with pytest.raises(UnsupportedError):
        temporal_kernel_value(1.0, TemporalKernel(TemporalKind.WHITE))


def test_sine_identity_examples():
    res = fbm_sine_identity(1.0, 1.0, 0.3)
    assert res.rhs == pytest.approx(0.25 * 2**0.6, rel=1e-15)
    assert res.rhs == pytest.approx(0.378929, abs=1e-6)
    assert res.lhs == pytest.approx(res.rhs, rel=1e-3)
    assert fbm_sine_identity(2.0, 1.0, 0.5).rhs == pytest.approx(0.5)
    assert sine_product_rhs(1.0, 1e-9, 0.3) < 1e-8


def test_sine_identity_against_mpmath():
    # independent oscillatory quadrature of the weighted spectral integral
    r, s, H = 0.5, 2.0, 0.4
    f = lambda u: mp.sin(r * u) * mp.sin(s * u) * u ** (-1 - 2 * H)
    with mp.workdps(30):
        raw = mp.quad(f, [0, 1]) + mp.quadosc(f, [1, mp.inf], omega=min(r, s))
    assert fbm_sine_identity(r, s, H).lhs == pytest.approx(float(c_H(H) * 2 * raw), rel=1e-6)


@settings(max_examples=25, deadline=None)
@given(st.floats(0.05, 3.0), st.floats(0.05, 3.0), st.floats(0.26, 0.49))
def test_sine_identity_property(r, s, H):
    res = fbm_sine_identity(r, s, H)
    assert res.lhs == pytest.approx(res.rhs, rel=1e-6)


def test_sine_identity_rejects_nonpositive():
    with pytest.raises(ParameterDomainError):
        fbm_sine_identity(0.0, 1.0, 0.3)


def test_normalizing_constant_positive_on_grid():
    grid = [0.05 * k for k in range(1, 20)]
    vals = [c_H(H) for H in grid]
    assert all(v > 0 and math.isfinite(v) for v in vals)
