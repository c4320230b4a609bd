import mpmath as mp
import numpy as np
import pytest
from hypothesis import given, strategies as st

from roughwave.chaos import (
    KernelPrimitive,
    analytic_threshold_verdict,
    probe_exponents,
    second_chaos_divergence_probe,
)
from roughwave.errors import InputError, ParameterDomainError, UnsupportedError
from roughwave.params import ModelParams, critical_kappa
from roughwave.verdicts import Convergence


def _kernel(kind):
    if kind == "sin2":
        return lambda v: mp.sin(v) ** 2
    return lambda v: mp.mpf(1) / 2 - mp.sin(2 * v) / (4 * v)


@pytest.mark.parametrize("kind,p", [("sin2", -1.6), ("step", -2.0), ("sin2", -2.5), ("step", 0.3)])
@pytest.mark.parametrize("Y", [0.3, 5.0, 150.0, 900.0])
def test_kernel_primitive_against_mpmath(kind, p, Y):
    g = _kernel(kind)
    with mp.workdps(25):
        exact = mp.quad(lambda v: g(v) * v**p, mp.linspace(0, Y, max(2, int(Y) // 2)))
    assert KernelPrimitive(kind, p)(Y) == pytest.approx(float(exact), rel=1e-12)


def test_kernel_primitive_increment_consistency():
    K = KernelPrimitive("sin2", -0.8)
    ya = np.array([0.1, 3.0, 2e3, 1e7])
    yb = ya * 4
    np.testing.assert_allclose(K.increment(ya, yb), K(yb) - K(ya), rtol=1e-9)


def test_kernel_primitive_rejects_bad_input():
    with pytest.raises(ValueError):
        KernelPrimitive("cos", -1.5)
    with pytest.raises(ValueError):
        KernelPrimitive("sin2", -3.0)


def test_probe_exponents_threshold():
    # both powers cross -1 exactly at kappa = 3 - 4H or kappa = 2
    p1, _ = probe_exponents(critical_kappa(0.3), 0.3)
    assert p1 == pytest.approx(-1.0, abs=1e-14)
    assert probe_exponents(2.0, 0.3)[1] == pytest.approx(-2.0)


@given(st.floats(0.01, 0.49), st.floats(0.05, 3.99))
def test_analytic_verdict_matches_threshold(H, kappa):
    v = analytic_threshold_verdict(kappa, H)
    lo = critical_kappa(H)
    if kappa > max(lo, 1.0) + 1e-9:
        assert v is Convergence.CONVERGENT
    elif kappa < lo - 1e-9:
        assert v is Convergence.DIVERGENT


def test_probe_examples():
    H = 0.3
    assert second_chaos_divergence_probe((critical_kappa(H) - 0.2, H)).verdict is Convergence.DIVERGENT
    assert second_chaos_divergence_probe(ModelParams(2.0, H)).verdict is Convergence.CONVERGENT


def test_probe_boundary_is_logarithmic():
    r = second_chaos_divergence_probe((1.8, 0.3))
    assert r.verdict is Convergence.DIVERGENT
    # ratios tend to one while the increments stop decaying
    assert r.ratios[-1] < 1.05
    assert abs(r.decay_rate) < 0.01
    inc = np.asarray(r.increments[-5:])
    np.testing.assert_allclose(inc, inc.mean(), rtol=1e-3)


def test_probe_values_increase():
    r = second_chaos_divergence_probe((2.0, 0.3), cutoffs=[10.0, 100.0, 1e3, 1e4])
    assert np.all(np.diff(r.values) > 0)
    assert r.quadrature_error < 1e-3 * r.values[0]


def test_probe_input_errors():
    with pytest.raises(InputError):
        second_chaos_divergence_probe((2.0, 0.3), cutoffs=[10.0, 5.0, 20.0])
    with pytest.raises(ParameterDomainError):
        second_chaos_divergence_probe((2.0, 0.6))
    with pytest.raises(UnsupportedError):
        second_chaos_divergence_probe(ModelParams(2.0, 0.3, 0.75))
