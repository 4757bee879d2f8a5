import math
import numpy as np
import pytest

from fractions import Fraction

from pycasimir import (Channel, EnergyUnit, LocalGeometry,
                       PolarizabilityTensor, ThermalConfig, beta_T0_exact,
                       classical_coefficients, classical_from_beta,
                       eta_coefficients, u_classical, u_full, u_retarded)
from pycasimir.errors import DomainError, ValidationError, ValidityWarning
from pycasimir.eta_retarded import CLASSICAL_COEFFICIENTS
from pycasimir.specfun import MATH_CONSTANTS

# Anisotropic polarizability with mixed zx and zy components
ALPHA = PolarizabilityTensor([[1.3, 0.0, 0.2],
                              [0.0, 0.7, -0.1],
                              [0.2, -0.1, 1.1]])


def _channels(breakdown):
    return np.array([breakdown.channel_term(c) for c in Channel])


def test_classical_from_beta():
    assert classical_from_beta() == CLASSICAL_COEFFICIENTS

    rebuilt = classical_from_beta()
    xx = rebuilt["xx"]
    zz = rebuilt["zz"]
    assert (xx[(2, 0)], xx[(0, 2)], xx[(1, 1)]) == (Fraction(17, 128),
                                                    Fraction(5, 128),
                                                    Fraction(2, 128))
    assert (zz[(2, 0)], zz[(0, 2)], zz[(1, 1)]) == (Fraction(5, 64),
                                                    Fraction(5, 64),
                                                    Fraction(-2, 64))


def test_classical_coefficients_copy():
    coefficients = classical_coefficients()
    coefficients["xx"][(0, 0)] = Fraction(0)
    assert CLASSICAL_COEFFICIENTS["xx"][(0, 0)] == Fraction(1, 8)


def test_flat_eta():
    eta = eta_coefficients(LocalGeometry.from_dimensionless(0.0, 0.0), 0.0)
    assert eta.eta_perp == 0.125
    assert eta.eta_zz == 0.125
    assert eta.eta_zi == (0.0, 0.0)
    assert eta.eta_xy == 0.0


def test_eta_zero_temperature_matches_integrals():
    s1, s2 = 0.12, -0.07
    gradient = (0.04, 0.02)
    eta = eta_coefficients(LocalGeometry.from_dimensionless(s1, s2, gradient),
                           0.0)

    integral = lambda p, q=1: float(beta_T0_exact((p, q)))
    s_sum = s1 + s2
    s_sq_sum = s1 ** 2 + s2 ** 2
    assert eta.eta_perp == pytest.approx(
        0.5 * (integral(0, 1) + s_sum * integral(2, 1)
               + s_sum ** 2 * integral(4, 1) + s_sq_sum * integral(4, 3)),
        rel=1e-14)
    assert eta.eta_zz == pytest.approx(
        0.5 * (integral(0, 2) + s_sum * integral(2, 2)
               + s_sum ** 2 * integral(4, 2) + s_sq_sum * integral(4, 4)),
        rel=1e-14)
    assert np.allclose(eta.eta_zi, 0.5 * integral(3) * np.array(gradient),
                       rtol=1e-14, atol=0.0)
    assert eta.eta_xy == pytest.approx(
        0.25 * (integral(2, 3) * (s1 - s2)
                + integral(4, 5) * (s1 ** 2 - s2 ** 2)), rel=1e-14)


def test_verbatim_drops_perp_tau5_term():
    s1, s2, tau = 0.1, 0.2, 0.25
    geom = LocalGeometry.from_dimensionless(s1, s2)
    completed = eta_coefficients(geom, tau)
    verbatim = eta_coefficients(geom, tau, verbatim=True)

    z5 = MATH_CONSTANTS.zeta5 / math.pi ** 4
    assert verbatim.eta_perp - completed.eta_perp == pytest.approx(
        9.0 / 32.0 * z5 * tau ** 5 * (s1 ** 2 + s2 ** 2), rel=1e-9)
    assert verbatim.eta_zz == completed.eta_zz
    assert verbatim.eta_xy == completed.eta_xy


def test_retarded_matches_full_at_zero_temperature():
    geom = LocalGeometry.from_dimensionless(0.15, -0.1, (0.05, -0.03))
    full = u_full(ALPHA, geom, ThermalConfig())
    retarded = u_retarded(ALPHA, geom, 0.0)

    assert retarded.unit == EnergyUnit.QUANTUM
    assert np.allclose(_channels(full), _channels(retarded), rtol=1e-9,
                       atol=1e-12)
    assert np.allclose(full.contributions, retarded.contributions,
                       rtol=1e-9, atol=1e-12)


def test_retarded_residual_scales_as_tau6(rng):
    taus = [0.05, 0.1, 0.2]
    for _ in range(3):
        geom = LocalGeometry.from_dimensionless(
            rng.uniform(0.05, 0.2), rng.uniform(-0.2, -0.05),
            (rng.uniform(0.05, 0.1), rng.uniform(-0.1, -0.05)))

        scaled = []
        for tau in taus:
            cfg = ThermalConfig(tau=tau, sum_rel_tol=1e-15)
            residual = (_channels(u_full(ALPHA, geom, cfg))
                        - _channels(u_retarded(ALPHA, geom, tau)))
            scaled.append(residual / tau ** 6)
        scaled = np.array(scaled)

        # Same sign and a constant within a factor of 3 in every channel
        assert np.all(scaled[0] * scaled[1:] > 0.0)
        ratio = np.max(np.abs(scaled), axis=0) / np.min(np.abs(scaled), axis=0)
        assert np.all(ratio <= 3.0)


def test_classical_limit():
    geom = LocalGeometry.from_dimensionless(0.15, -0.1, (0.05, -0.03))
    tau = 50.0
    full = u_full(ALPHA, geom, ThermalConfig(tau=tau)).to_unit(
        EnergyUnit.THERMAL)
    classical = u_classical(ALPHA, geom, tau)

    assert classical.unit == EnergyUnit.THERMAL
    assert full.total == pytest.approx(classical.total, rel=1e-10)
    assert np.allclose(full.contributions, classical.contributions,
                       rtol=1e-10, atol=1e-14)


def test_classical_corrections_decay_exponentially():
    geom = LocalGeometry.from_dimensionless(0.0, 0.0)
    classical = u_classical(1.0, geom).total

    def correction(tau):
        full = u_full(1.0, geom, ThermalConfig(tau=tau))
        return abs(full.to_unit(EnergyUnit.THERMAL).total - classical)

    assert correction(10.0) / correction(5.0) <= math.exp(-5.0)


def test_classical_in_plane_values():
    s1, s2 = 0.2, 0.1
    geom = LocalGeometry.from_dimensionless(s1, s2)

    bracket_xx = (1 / 8 - 9 / 64 * s1 - 3 / 64 * s2
                  + (17 * s1 ** 2 + 5 * s2 ** 2 + 2 * s1 * s2) / 128)
    assert u_classical((1.0, 0.0, 0.0), geom).total == pytest.approx(
        -0.5 * bracket_xx, rel=1e-14)

    bracket_yy = (1 / 8 - 3 / 64 * s1 - 9 / 64 * s2
                  + (5 * s1 ** 2 + 17 * s2 ** 2 + 2 * s1 * s2) / 128)
    assert u_classical((0.0, 1.0, 0.0), geom).total == pytest.approx(
        -0.5 * bracket_yy, rel=1e-14)

    bracket_zz = (1 / 4 - (s1 + s2) / 16
                  + (5 * s1 ** 2 + 5 * s2 ** 2 - 2 * s1 * s2) / 64)
    assert u_classical((0.0, 0.0, 1.0), geom).total == pytest.approx(
        -0.5 * bracket_zz, rel=1e-14)


def test_classical_gradient_term():
    geom = LocalGeometry.from_dimensionless(0.0, 0.0, (0.08, 0.0))
    alpha = PolarizabilityTensor([[0.0, 0.0, 1.0],
                                  [0.0, 0.0, 0.0],
                                  [1.0, 0.0, 0.0]])
    breakdown = u_classical(alpha, geom)
    assert breakdown.gradient_term == pytest.approx(-0.5 * 0.08 / 32.0)
    assert breakdown.total == breakdown.gradient_term


def test_classical_unit_conversion():
    geom = LocalGeometry.from_dimensionless(0.1, 0.1)
    breakdown = u_classical(1.0, geom, tau=0.5)
    quantum = breakdown.to_unit(EnergyUnit.QUANTUM)
    assert quantum.total == pytest.approx(0.25 * breakdown.total, rel=1e-15)
    assert quantum.to_unit(EnergyUnit.THERMAL).total == pytest.approx(
        breakdown.total, rel=1e-15)

    with pytest.raises(DomainError):
        u_classical(1.0, geom).to_unit(EnergyUnit.QUANTUM)


def test_requires_principal_frame():
    geom = LocalGeometry(1.0, [[0.1, 0.02], [0.02, 0.05]])
    with pytest.raises(ValidationError):
        eta_coefficients(geom, 0.1)
    with pytest.raises(ValidationError):
        u_retarded(1.0, geom, 0.1)
    with pytest.raises(ValidationError):
        u_classical(1.0, geom)


def test_negative_tau():
    with pytest.raises(ValidationError):
        u_retarded(1.0, LocalGeometry.from_dimensionless(0.0, 0.0), -0.1)


def test_validity_warnings():
    geom = LocalGeometry.from_dimensionless(0.1, 0.0)
    with pytest.warns(ValidityWarning):
        breakdown = u_retarded(1.0, geom, 0.5)
    assert not breakdown.tau_in_range
    assert breakdown.curvature_in_range
    assert len(breakdown.warnings) == 1

    with pytest.warns(ValidityWarning):
        breakdown = u_retarded(1.0, LocalGeometry.from_dimensionless(0.7, 0.0),
                               0.1)
    assert breakdown.tau_in_range
    assert not breakdown.curvature_in_range
