import math

import mpmath as mp
import numpy as np
import pytest
from hypothesis import given, strategies as st

from roughwave.greens import green_hat, green_wave_1d, y_minus_sin


def test_symbol_examples():
    assert green_hat(1.5, 0.0, 1.3) == 1.5
    assert green_hat(math.pi, 1.0, 2.0) == pytest.approx(0.0, abs=1e-15)
    assert green_hat(1.0, 4.0, 1.0) == pytest.approx(float(mp.sin(2) / 2), rel=1e-15)
    assert green_hat(1.0, 4.0, 1.0) == pytest.approx(0.454649, abs=1e-6)


def test_symbol_near_origin_keeps_relative_accuracy():
    with mp.workdps(40):
        for xi in (1e-12, 1e-9, 1e-6):
            x = mp.mpf(xi) ** mp.mpf(0.8)
            exact = mp.sin(2 * x) / x
            assert green_hat(2.0, xi, 1.6) == pytest.approx(float(exact), rel=1e-14)


def test_symbol_vectorized_and_even():
    xi = np.linspace(-5, 5, 11)
    out = green_hat(0.7, xi, 1.9)
    assert out.shape == xi.shape
    np.testing.assert_allclose(out, out[::-1], rtol=0, atol=0)


@given(st.floats(0, 10), st.floats(-50, 50), st.floats(0.1, 2.0))
def test_symbol_bounded_by_t(t, xi, kappa):
    assert abs(green_hat(t, xi, kappa)) <= t * (1 + 1e-12) + 1e-300


def test_wave_kernel_light_cone():
    assert green_wave_1d(1.0, 0.5) == 0.5
    assert green_wave_1d(1.0, 1.5) == 0.0
    assert green_wave_1d(1.0, -0.99) == 0.5


@pytest.mark.parametrize("y", [1e-8, 1e-3, 0.3, -0.49, 0.5, 2.0, -7.5, 100.0])
def test_y_minus_sin(y):
    with mp.workdps(40):
        exact = float(mp.mpf(y) - mp.sin(mp.mpf(y)))
    assert float(y_minus_sin(np.array([y]))[0]) == pytest.approx(exact, rel=1e-14)
