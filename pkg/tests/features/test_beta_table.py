import mpmath
import numpy as np
import pytest

from fractions import Fraction

from pycasimir import (beta_at_zero, beta_envelope, beta_eval,
                       beta_eval_asymptotic, beta_poly, beta_tail_envelope,
                       beta_T0_exact, BetaIndex)
from pycasimir.beta_table import (ASYMPTOTIC_MIN_XI, CROSSOVER_XI, TABLE,
                                  TAIL_ENVELOPE_MIN_XI)
from pycasimir.errors import BetaIndexError, DomainError, ValidationError
from pycasimir.beta_table import BetaPolyPair

# Exact values at xi = 0
BETA_AT_ZERO = {(0, 1): Fraction(1, 8), (0, 2): Fraction(1, 4),
                (2, 1): Fraction(-3, 32), (2, 2): Fraction(-1, 16),
                (2, 3): Fraction(-3, 32), (3, 1): Fraction(1, 32),
                (4, 1): Fraction(1, 128), (4, 2): Fraction(-1, 64),
                (4, 3): Fraction(5, 64), (4, 4): Fraction(3, 32),
                (4, 5): Fraction(3, 32)}

# Exact integrals over xi
BETA_INTEGRAL = {(0, 1): Fraction(1, 4), (0, 2): Fraction(1, 4),
                 (2, 1): Fraction(-3, 20), (2, 2): Fraction(-2, 15),
                 (2, 3): Fraction(-1, 10), (3, 1): Fraction(1, 15),
                 (4, 1): Fraction(3, 140), (4, 2): Fraction(-1, 120),
                 (4, 3): Fraction(13, 140), (4, 4): Fraction(3, 20),
                 (4, 5): Fraction(9, 140)}


def _oracle(idx, xi, dps=50):
    # Table row in extended precision with Ei(x) = -E1(x)
    mpmath.mp.dps = dps
    pair = beta_poly(idx)
    x = mpmath.mpf(xi)
    exp_part = sum(mpmath.mpf(c.numerator) / c.denominator * x ** i
                   for i, c in enumerate(pair.exp_part))
    ei_part = sum(mpmath.mpf(c.numerator) / c.denominator * x ** i
                  for i, c in enumerate(pair.ei_part))
    return exp_part * mpmath.exp(-2 * x) - ei_part * mpmath.e1(2 * x)


def test_table_has_every_row():
    assert len(TABLE) == 11
    assert {(i.p, i.q) for i in TABLE} == set(BETA_AT_ZERO)


def test_beta_at_zero(beta_index):
    key = (beta_index.p, beta_index.q)
    assert beta_at_zero(beta_index) == BETA_AT_ZERO[key]
    assert beta_eval(beta_index, 0.0) == float(BETA_AT_ZERO[key])


def test_beta_T0_exact(beta_index):
    assert beta_T0_exact(beta_index) == BETA_INTEGRAL[(beta_index.p,
                                                       beta_index.q)]


def test_against_oracle_small_xi(beta_index):
    envelope = np.asarray(beta_envelope(beta_index))
    for xi in [1e-3, 0.1, 0.5, 1.0, 2.5, 5.0, 10.0]:
        bound = np.polynomial.polynomial.polyval(xi, envelope) * np.exp(-2.0 * xi)
        oracle = float(_oracle(beta_index, xi))
        assert abs(beta_eval(beta_index, xi) - oracle) <= 1e-12 * bound


@pytest.mark.parametrize("xi", [15.0, 20.0, 25.0, 30.0])
def test_cancellation_against_oracle(ei_index, xi):
    oracle = float(_oracle(ei_index, xi))
    assert beta_eval(ei_index, xi) == pytest.approx(oracle, rel=1e-10)


@pytest.mark.parametrize("xi", [ASYMPTOTIC_MIN_XI, 19.0, CROSSOVER_XI,
                                21.0, 40.0])
def test_asymptotic_against_oracle(ei_index, xi):
    oracle = float(_oracle(ei_index, xi))
    assert beta_eval_asymptotic(ei_index, xi) == pytest.approx(oracle,
                                                               rel=1e-10)


def test_continuity_across_crossover(beta_index):
    xi = np.array([np.nextafter(CROSSOVER_XI, 0.0), CROSSOVER_XI])
    below, above = beta_eval(beta_index, xi)
    assert below == pytest.approx(above, rel=1e-10)


def test_envelope_bounds_beta(beta_index):
    xi = np.linspace(0.0, 40.0, 401)
    envelope = np.asarray(beta_envelope(beta_index))
    assert np.all(envelope >= 0.0)

    bound = np.polynomial.polynomial.polyval(xi, envelope) * np.exp(-2.0 * xi)
    assert np.all(np.abs(beta_eval(beta_index, xi)) <= bound * (1.0 + 1e-12))


def test_tail_envelope_bounds_beta(beta_index):
    envelope = np.asarray(beta_tail_envelope(beta_index))
    assert np.all(envelope >= 0.0)

    for xi in [TAIL_ENVELOPE_MIN_XI, 12.0, 15.0, 20.0, 30.0, 50.0]:
        bound = (np.polynomial.polynomial.polyval(xi, envelope)
                 * np.exp(-2.0 * xi))
        assert abs(float(_oracle(beta_index, xi))) <= bound


def test_tail_envelope_keeps_cancellation(ei_index):
    # P and the Ei part cancel at leading orders so the tail envelope is
    # far below the absolute-value one
    xi = CROSSOVER_XI
    tail = np.polynomial.polynomial.polyval(xi, beta_tail_envelope(ei_index))
    full = np.polynomial.polynomial.polyval(xi, beta_envelope(ei_index))
    assert tail <= 0.1 * full
    assert len(beta_tail_envelope(ei_index)) < len(beta_envelope(ei_index))


def test_small_xi_limit(beta_index):
    assert beta_eval(beta_index, 1e-8) == pytest.approx(
        float(beta_at_zero(beta_index)), abs=1e-7)


def test_exponential_decay(beta_index):
    assert abs(beta_eval(beta_index, 40.0)) < 1e-25 * abs(beta_eval(beta_index,
                                                                    5.0))


def test_array_evaluation():
    xi = np.array([[0.0, 1.0], [25.0, 3.0]])
    values = beta_eval((4, 2), xi)
    assert values.shape == xi.shape
    assert values[1, 0] == beta_eval("4,2", 25.0)
    assert isinstance(beta_eval(BetaIndex(0, 1), 1.0), float)


@pytest.mark.parametrize("idx", ["4,2", "4_2", "(4,2)", (4, 2), [4, 2]])
def test_index_forms(idx):
    assert beta_at_zero(idx) == Fraction(-1, 64)


def test_single_p3_index():
    assert beta_at_zero("3") == beta_at_zero((3, 1)) == Fraction(1, 32)


@pytest.mark.parametrize("idx", [(1, 1), (2, 4), (4, 6), "x", (1, 2, 3)])
def test_invalid_index(idx):
    with pytest.raises(BetaIndexError):
        beta_eval(idx, 1.0)


def test_negative_xi():
    with pytest.raises(DomainError):
        beta_eval((0, 1), [1.0, -0.5])
    with pytest.raises(DomainError):
        beta_eval_asymptotic((4, 2), ASYMPTOTIC_MIN_XI - 1.0)


def test_poly_pair_validation():
    with pytest.raises(ValidationError):
        BetaPolyPair((Fraction(1),), (Fraction(1),))
    with pytest.raises(ValidationError):
        BetaPolyPair(tuple(Fraction(1) for _ in range(7)))
