import math

import pytest
from hypothesis import given, strategies as st

from roughwave.errors import ParameterDomainError, RegimeError
from roughwave.params import (
    Equation,
    ModelParams,
    Regime,
    TemporalKind,
    critical_kappa,
    exponents,
    validate_params,
)


@pytest.mark.parametrize("kappa,H,H0,kind,regime", [
    (2.0, 0.3, 0.5, TemporalKind.WHITE, Regime.WAVE_SOLVABLE),
    (1.8, 0.3, 0.5, TemporalKind.WHITE, Regime.WAVE_NON_SOLVABLE),
    (2.0, 0.45, 0.6, TemporalKind.COLORED, Regime.WAVE_SOLVABLE),
    (2.0, 0.25, 0.5, None, Regime.WAVE_NON_SOLVABLE),
])
def test_regimes(kappa, H, H0, kind, regime):
    assert validate_params(ModelParams(kappa, H, H0, kind)).regime is regime


def test_heat_equation_regime():
    assert validate_params(ModelParams(2.0, 0.3, 0.5, equation=Equation.HEAT)).regime is Regime.HEAT_SOLVABLE
    assert validate_params(ModelParams(2.0, 0.2, 0.5, equation=Equation.HEAT)).regime is Regime.HEAT_NON_SOLVABLE


@pytest.mark.parametrize("kwargs", [
    dict(kappa=0.0, hurst_space=0.3), dict(kappa=2.5, hurst_space=0.3),
    dict(kappa=2.0, hurst_space=0.0), dict(kappa=2.0, hurst_space=1.0),
    dict(kappa=2.0, hurst_space=0.3, hurst_time=1.0),
    dict(kappa=math.nan, hurst_space=0.3),
])
def test_out_of_range_rejected(kwargs):
    with pytest.raises(ParameterDomainError):
        ModelParams(**kwargs)


def test_exponent_examples():
    assert exponents(validate_params(ModelParams(2.0, 0.3))).growth == pytest.approx(1.0)
    ex = exponents(validate_params(ModelParams(2.0, 0.3, 0.75)))
    assert ex.growth == pytest.approx(4.2 / 3.2, rel=1e-14)
    ex = exponents(validate_params(ModelParams(2.0, 0.3)))
    assert ex.holder_time_sup == pytest.approx(0.3)
    assert ex.holder_space_sup == pytest.approx(0.3)


def test_exponents_need_solvable():
    with pytest.raises(RegimeError):
        exponents(validate_params(ModelParams(1.8, 0.3)))


@given(st.floats(0.2501, 0.4999), st.floats(0.0, 1.0))
def test_white_growth_is_one(H, frac):
    lo = critical_kappa(H)
    kappa = lo + 1e-6 + frac * (2.0 - lo - 1e-6)
    vp = validate_params(ModelParams(kappa, H))
    assert vp.regime is Regime.WAVE_SOLVABLE
    ex = exponents(vp)
    assert ex.growth == pytest.approx(1.0, abs=1e-12)
    assert ex.holder_time_sup > 0 and ex.holder_space_sup > 0


@given(st.floats(0.26, 0.49), st.floats(0.5, 0.99))
def test_growth_increases_with_hurst_time(H, H0):
    vp = validate_params(ModelParams(2.0, H, H0))
    assert exponents(vp).growth >= 1.0 - 1e-12
