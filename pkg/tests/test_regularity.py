import mpmath as mp
import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from roughwave.errors import InputError, RegimeError, UnsupportedError
from roughwave.params import ModelParams, validate_params
from roughwave.regularity import (
    DYADIC_OFFSETS,
    IncrementKind,
    IncrementSample,
    holder_verdict,
    increment_samples,
    sine_increment_cap,
    sine_increment_constant,
    space_increment_variance,
    time_increment_variance,
)
from roughwave.verdicts import Consistency


def _d1(H):
    # int_0^inf (1 - cos c x) x^(-1-2H) dx = |c|^(2H) D1
    return mp.gamma(1 - 2 * H) * mp.cos(mp.pi * H) / (2 * H)


def time_oracle(t, h, H):
    """kappa = 2: (sin ax - sin bx)^2 expanded into 1 - cos terms, then the D1 formula."""
    t, h, H = mp.mpf(t), mp.mpf(h), mp.mpf(H)
    a = mp.quad(lambda u: (2 * (u + h)) ** (2 * H) / 2 + (2 * u) ** (2 * H) / 2 + h ** (2 * H)
                - (2 * u + h) ** (2 * H), [0, t])
    b = mp.quad(lambda u: (2 * u) ** (2 * H) / 2, [0, h])
    return float(2 * _d1(H) * (a + b)), float(2 * _d1(H) * b)


def space_oracle(t, z, H):
    t, z, H = mp.mpf(t), mp.mpf(z), mp.mpf(H)
    f = lambda u: (2 * u) ** (2 * H) + z ** (2 * H) - abs(2 * u + z) ** (2 * H) / 2 - abs(2 * u - z) ** (2 * H) / 2
    return float(2 * _d1(H) * mp.quad(f, [0, min(z / 2, t), t]))


@pytest.mark.parametrize("H", [0.3, 0.45])
@pytest.mark.parametrize("t,h", [(1.0, 0.25), (1.0, 2**-6), (2.0, 1.0), (1.0, 2**-9)])
def test_time_variance_closed_form(H, t, h):
    s = time_increment_variance(t, h, ModelParams(2.0, H))
    total, b = time_oracle(t, h, H)
    assert s.variance == pytest.approx(total, rel=1e-9)
    assert s.b_part == pytest.approx(b, rel=1e-9)
    assert s.quadrature_error < 1e-8 * s.variance


@pytest.mark.parametrize("H", [0.3, 0.45])
@pytest.mark.parametrize("t,z", [(1.0, 0.25), (1.0, 2**-6), (2.0, 1.0), (0.5, 3.0)])
def test_space_variance_closed_form(H, t, z):
    s = space_increment_variance(t, z, ModelParams(2.0, H))
    assert s.variance == pytest.approx(space_oracle(t, z, H), rel=1e-9)


def test_space_variance_even_and_zero(white_03):
    a = space_increment_variance(1.0, 0.3, white_03)
    b = space_increment_variance(1.0, -0.3, white_03)
    assert a.variance == b.variance
    assert space_increment_variance(1.0, 0.0, white_03).variance == 0.0


def test_space_variance_other_kappa():
    # kappa != 2: compare two tolerances, and check the small-offset power law
    p = ModelParams(1.9, 0.4)
    s = space_increment_variance(1.0, 2**-6, p)
    assert s.variance > 0 and s.quadrature_error < 1e-8 * s.variance
    samples = increment_samples(IncrementKind.SPACE, 1.0, DYADIC_OFFSETS, p)
    v = holder_verdict(samples, IncrementKind.SPACE, p)
    assert v.verdict is Consistency.CONSISTENT


def test_time_variance_monotone_to_zero(white_03):
    vals = [time_increment_variance(1.0, 2.0**-k, white_03).variance for k in range(2, 12)]
    assert np.all(np.diff(vals) < 0)
    assert vals[-1] < 0.05 * vals[0]


def test_b_part_scaling(white_03):
    b = [time_increment_variance(1.0, h, white_03).b_part for h in (2**-5, 2**-6)]
    assert b[0] / b[1] == pytest.approx(2**1.6, rel=1e-9)


def test_time_variance_input_checks(white_03):
    with pytest.raises(InputError):
        time_increment_variance(1.0, 2.0, white_03)
    with pytest.raises(UnsupportedError):
        time_increment_variance(1.0, 0.1, ModelParams(2.0, 0.3, 0.75))
    with pytest.raises(RegimeError):
        time_increment_variance(1.0, 0.1, ModelParams(1.8, 0.3))


@pytest.mark.parametrize("H", [0.3, 0.45])
def test_holder_verdicts_consistent(H):
    p = validate_params(ModelParams(2.0, H))
    for kind in IncrementKind:
        v = holder_verdict(increment_samples(kind, 1.0, DYADIC_OFFSETS, p), kind, p)
        assert v.verdict is Consistency.CONSISTENT
        assert v.supremum == pytest.approx(H)


def test_holder_synthetic(white_03):
    samples = [IncrementSample(h, h**0.6, 0.0) for h in DYADIC_OFFSETS]
    v = holder_verdict(samples, "Time", white_03)
    assert v.fit.slope == pytest.approx(0.6, abs=1e-12)
    assert v.verdict is Consistency.CONSISTENT
    bad = [IncrementSample(h, h**1.0, 0.0) for h in DYADIC_OFFSETS]
    assert holder_verdict(bad, "Time", white_03).verdict is Consistency.INCONSISTENT


def test_holder_input_checks(white_03):
    with pytest.raises(InputError):
        holder_verdict([IncrementSample(h, h, 0.0) for h in DYADIC_OFFSETS[:3]], "Time", white_03)
    with pytest.raises(InputError):
        holder_verdict([IncrementSample(h, h, 0.0) for h in (0.1, 0.07, 0.05, 0.02, 0.01)], "Space", white_03)


def test_sine_increment_constant():
    assert sine_increment_constant(1.0) == 1.0
    assert sine_increment_constant(0.5) == pytest.approx(2**0.5 / 0.5)
    with pytest.raises(InputError):
        sine_increment_constant(0.0)


@settings(max_examples=200)
@given(st.floats(0, 20), st.floats(0, 5), st.floats(-40, 40), st.floats(0.01, 1.0))
def test_sine_increment_cap_holds(t, h, x, gamma):
    lhs, cap = sine_increment_cap(t, h, x, gamma)
    assert lhs <= cap + 1e-12
