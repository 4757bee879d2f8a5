import math
import pytest

from pycasimir import (ALL_INDICES, BetaIndex, ThermalConfig, beta_at_zero,
                       beta_classical, beta_T0_exact, beta_T0_integral,
                       beta_tilde, beta_tilde_low_temperature,
                       beta_tilde_table, matsubara_beta_sum,
                       normalized_beta_curve)
from pycasimir.constants import (HBAR_C_EV_NM, K_B_EV, temperature_from_tau,
                                 thermal_wavelength, tau_from_temperature)
from pycasimir.errors import ConvergenceError, DomainError, ValidationError


def test_T0_integral(beta_index):
    assert beta_T0_integral(beta_index, 1e-11) == pytest.approx(
        float(beta_T0_exact(beta_index)), rel=1e-9)


@pytest.mark.parametrize("tau", [0.01, 0.04, 0.3, 1.0, 5.0])
def test_sum_terms_and_bound(beta_index, tau):
    cfg = ThermalConfig(tau=tau, sum_rel_tol=1e-12)
    result = matsubara_beta_sum(beta_index, cfg)

    # e^{-2 n tau} reaches e^{-40} after 40 / (2 tau) terms
    assert result.terms_used <= math.ceil(40.0 / (2.0 * tau)) + 5
    assert result.truncation_bound <= 1e-12 * result.scale
    assert result.scale >= abs(result.value)


def test_sum_tolerance_monotonic():
    loose = matsubara_beta_sum((4, 2), ThermalConfig(tau=0.2, sum_rel_tol=1e-6))
    tight = matsubara_beta_sum((4, 2), ThermalConfig(tau=0.2, sum_rel_tol=1e-14))
    assert loose.terms_used < tight.terms_used
    assert abs(loose.value - tight.value) <= 2.0 * loose.truncation_bound


def test_sum_requires_positive_tau():
    with pytest.raises(DomainError):
        matsubara_beta_sum((0, 1), ThermalConfig(tau=0.0))


def test_sum_term_budget():
    with pytest.raises(ConvergenceError) as ex:
        matsubara_beta_sum((0, 1), ThermalConfig(tau=0.01, max_terms=50))
    assert ex.value.terms_used == 50
    assert ex.value.estimate > 0.0


@pytest.mark.parametrize("tau", [0.05, 0.1])
def test_low_temperature_expansion(beta_index, tau):
    cfg = ThermalConfig(tau=tau, sum_rel_tol=1e-15)
    exact = matsubara_beta_sum(beta_index, cfg).value

    # Residual of the tau^5 expansion scales like tau^6
    residual_5 = exact - beta_tilde_low_temperature(beta_index, tau, 5)
    residual_half = (matsubara_beta_sum(beta_index, cfg.with_tau(0.5 * tau)).value
                     - beta_tilde_low_temperature(beta_index, 0.5 * tau, 5))
    assert 64.0 / 3.0 <= residual_5 / residual_half <= 64.0 * 3.0

    # Including the tau^6 and tau^7 terms removes most of it
    residual_7 = exact - beta_tilde_low_temperature(beta_index, tau, 7)
    assert abs(residual_7) < 0.05 * abs(residual_5)


def test_low_temperature_zero(beta_index):
    assert beta_tilde_low_temperature(beta_index, 0.0) == pytest.approx(
        float(beta_T0_exact(beta_index)), rel=1e-15)

    with pytest.raises(DomainError):
        beta_tilde_low_temperature(beta_index, 0.1, max_order=8)


def test_small_tau_limit(beta_index):
    (_, ratio), = normalized_beta_curve(beta_index, [0.01])
    assert ratio == pytest.approx(1.0, abs=1e-3)


def test_flat_small_tau_limit():
    (_, ratio), = normalized_beta_curve((0, 1), [0.01])
    assert ratio == pytest.approx(1.0, abs=1e-4)


def test_classical_asymptote(beta_index):
    # Linear in tau with slope beta(0) / 2 over the integral
    tau = 16.0
    slope = 0.5 * float(beta_at_zero(beta_index) / beta_T0_exact(beta_index))
    (_, ratio), = normalized_beta_curve(beta_index, [tau])
    assert ratio == pytest.approx(slope * tau, rel=1e-6)


def test_classical_asymptote_flat_tau_8():
    (_, ratio), = normalized_beta_curve((0, 1), [8.0])
    assert ratio == pytest.approx(2.0, rel=1e-3)
    assert ratio > 2.0


@pytest.mark.parametrize("tau", [0.1, 0.3, 0.6, 1.0])
def test_strongest_temperature_dependence(tau):
    deviation = {idx: abs(normalized_beta_curve(idx, [tau])[0][1] - 1.0)
                 for idx in ALL_INDICES}
    assert max(deviation, key=deviation.get) == BetaIndex(4, 2)


def test_curve_grid_validation():
    with pytest.raises(DomainError):
        normalized_beta_curve((0, 1), [0.0, 1.0])
    with pytest.raises(DomainError):
        normalized_beta_curve((0, 1), [2.0, 1.0])
    assert normalized_beta_curve((0, 1), []) == []


def test_beta_tilde_dispatch():
    assert beta_tilde((2, 1), ThermalConfig()) == pytest.approx(-0.15, rel=1e-9)
    cfg = ThermalConfig(tau=0.5)
    assert beta_tilde((2, 1), cfg) == matsubara_beta_sum((2, 1), cfg).value


def test_beta_tilde_table():
    cfg = ThermalConfig(tau=0.7)
    table = beta_tilde_table(cfg)
    assert tuple(table.keys()) == ALL_INDICES
    assert beta_tilde_table(ThermalConfig(tau=0.7)) is table


def test_beta_classical(beta_index):
    assert beta_classical(beta_index) == beta_at_zero(beta_index)


@pytest.mark.parametrize("kwargs", [{"tau": -1.0}, {"tau": math.nan},
                                    {"tau": math.inf},
                                    {"sum_rel_tol": 0.1},
                                    {"sum_rel_tol": 0.0},
                                    {"quad_rel_tol": 1e-15},
                                    {"max_terms": 1}])
def test_config_validation(kwargs):
    with pytest.raises(ValidationError):
        ThermalConfig(**kwargs)


def test_thermal_wavelength():
    # hbar c / (2 pi k_B T) at room temperature
    wavelength = thermal_wavelength(300.0)
    assert wavelength == pytest.approx(1214.82e-9, rel=1e-5)
    assert wavelength == pytest.approx(
        HBAR_C_EV_NM / (2.0 * math.pi * K_B_EV * 300.0) * 1e-9, rel=1e-14)
    assert thermal_wavelength(0.0) == math.inf

    with pytest.raises(DomainError):
        thermal_wavelength(-1.0)


def test_tau_conversions():
    tau = tau_from_temperature(1000e-9, 300.0)
    assert tau == pytest.approx(0.82317, rel=1e-4)
    assert temperature_from_tau(1000e-9, tau) == pytest.approx(300.0,
                                                              rel=1e-14)
    assert ThermalConfig.from_temperature(1000e-9, 300.0).tau == tau
    assert tau_from_temperature(1e-6, 0.0) == 0.0
