"""Coefficient functions of the derivative expansion for a perfect conductor

Every coefficient has the form

.. math::

    \\beta^{(p)}_q(\\xi) = P(\\xi) e^{-2\\xi} + Q(\\xi)\\,\\mathrm{Ei}(2\\xi)

with rational polynomials :math:`P` and :math:`Q` and
:math:`\\mathrm{Ei}(x) = -E_1(x)`. At large :math:`\\xi` the two parts
cancel almost completely so, above :data:`CROSSOVER_XI`, the asymptotic
series of :math:`\\mathrm{Ei}` is merged with :math:`P` in exact rational
arithmetic before anything is rounded.
"""
import numpy as np

from collections import defaultdict
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import factorial
from numpy.polynomial import polynomial
from typing import Dict, Tuple, Union

from .errors import DomainError, ValidationError
from .model_preprocessor import BetaIndexType, _get_beta_index
from .specfun import ArrayLike, table_Ei
from .types import ALL_INDICES, BetaIndex

# Smallest argument evaluated with the merged asymptotic series
CROSSOVER_XI = 20.0

# Smallest argument the asymptotic series may be evaluated at
ASYMPTOTIC_MIN_XI = 18.0

# Number of terms kept in the asymptotic series of Ei(2 xi)
ASYMPTOTIC_TERMS = 40

# Smallest argument covered by the cancellation-aware tail envelope
TAIL_ENVELOPE_MIN_XI = 10.0


@dataclass(frozen=True)
class BetaPolyPair:
    """Rational polynomials multiplying :math:`e^{-2\\xi}` and
    :math:`\\mathrm{Ei}(2\\xi)`, lowest power first"""
    exp_part: Tuple[Fraction, ...]
    ei_part: Tuple[Fraction, ...] = ()

    def __post_init__(self):
        if len(self.exp_part) > 6 or len(self.ei_part) > 7:
            raise ValidationError("Coefficient polynomial degree too high")
        if any(c != 0 for c in self.ei_part[:2]):
            raise ValidationError("Ei polynomial must start at xi^2")


def _poly(scale: Fraction, *coefficients) -> Tuple[Fraction, ...]:
    return tuple(scale * c for c in coefficients)


F = Fraction

# Table of coefficient polynomials
TABLE: Dict[BetaIndex, BetaPolyPair] = {
    BetaIndex(0, 1): BetaPolyPair(_poly(F(1, 8), 1, 2, 4)),
    BetaIndex(0, 2): BetaPolyPair(_poly(F(1, 4), 1, 2)),
    BetaIndex(2, 1): BetaPolyPair(_poly(F(-1, 32), 3, 6, 6, 4),
                                  _poly(F(1), 0, 0, 0, 0, F(-1, 4))),
    BetaIndex(2, 2): BetaPolyPair(_poly(F(-1, 16), 1, 2, -2, 4),
                                  _poly(F(1), 0, 0, 1, 0, F(-1, 2))),
    BetaIndex(2, 3): BetaPolyPair(_poly(F(-1, 32), 3, 6, 2, -4),
                                  _poly(F(1), 0, 0, 0, 0, F(1, 4))),
    BetaIndex(3, 1): BetaPolyPair(_poly(F(1, 32), 1, 2, -2, 4),
                                  _poly(F(1), 0, 0, F(-1, 2), 0, F(1, 4))),
    BetaIndex(4, 1): BetaPolyPair(_poly(F(1, 384), 3, 6, 15, 22, 2, -4),
                                  _poly(F(1), 0, 0, 0, 0, F(1, 8), 0,
                                        F(-1, 48))),
    BetaIndex(4, 2): BetaPolyPair(_poly(F(-1, 960), 15, 542, 259, -546,
                                        -14, 28),
                                  _poly(F(1), 0, 0, -2, 0, F(7, 6), 0,
                                        F(-7, 120))),
    BetaIndex(4, 3): BetaPolyPair(_poly(F(1, 192), 15, 30, -9, 70, 2, -4),
                                  _poly(F(1), 0, 0, 0, 0, F(3, 4), 0,
                                        F(-1, 24))),
    BetaIndex(4, 4): BetaPolyPair(_poly(F(1, 480), 45, 218, -59, 146,
                                        14, -28),
                                  _poly(F(1), 0, 0, 0, 0, F(2, 3), 0,
                                        F(-7, 60))),
    BetaIndex(4, 5): BetaPolyPair(_poly(F(1, 96), 9, 18, -27, 50, -2, 4),
                                  _poly(F(1), 0, 0, 0, 0, 1, 0, F(1, 12)))}

assert tuple(TABLE.keys()) == ALL_INDICES


def beta_poly(idx: BetaIndexType) -> BetaPolyPair:
    """Exact rational polynomial pair of one coefficient

    Args:
        idx:    coefficient index e.g. ``BetaIndex(4, 2)`` or ``(4, 2)``
    """
    return TABLE[_get_beta_index(idx)]


def beta_at_zero(idx: BetaIndexType) -> Fraction:
    """Exact value :math:`\\beta^{(p)}_q(0)`"""
    return beta_poly(idx).exp_part[0]


def beta_T0_exact(idx: BetaIndexType) -> Fraction:
    """Exact :math:`\\int_0^\\infty \\beta^{(p)}_q(\\xi)\\,d\\xi`

    Uses :math:`\\int_0^\\infty \\xi^k e^{-2\\xi} d\\xi = k!/2^{k+1}` and
    :math:`\\int_0^\\infty \\xi^k \\mathrm{Ei}(2\\xi) d\\xi = -k!/((k+1)2^{k+1})`.
    """
    pair = beta_poly(idx)
    exp_integral = sum(F(factorial(k), 2 ** (k + 1)) * c
                       for k, c in enumerate(pair.exp_part))
    ei_integral = sum(F(-factorial(k), (k + 1) * 2 ** (k + 1)) * c
                      for k, c in enumerate(pair.ei_part))
    return exp_integral + ei_integral


def beta_envelope(idx: BetaIndexType) -> Tuple[float, ...]:
    """Non-negative polynomial :math:`E(\\xi)` with
    :math:`|\\beta(\\xi)| \\le E(\\xi) e^{-2\\xi}`

    Follows from :math:`e^x E_1(x) < 1/x` applied to the Ei part.
    """
    return _envelope(_get_beta_index(idx))


@lru_cache(maxsize=None)
def _envelope(idx: BetaIndex) -> Tuple[float, ...]:
    pair = TABLE[idx]
    degree = max(len(pair.exp_part), len(pair.ei_part) - 1)
    envelope = [0.0] * degree
    for i, c in enumerate(pair.exp_part):
        envelope[i] += abs(float(c))
    for j, c in enumerate(pair.ei_part):
        if c != 0:
            envelope[j - 1] += 0.5 * abs(float(c))
    return tuple(envelope)


def beta_tail_envelope(idx: BetaIndexType) -> Tuple[float, ...]:
    """Non-negative polynomial :math:`E_t(\\xi)` with
    :math:`|\\beta(\\xi)| \\le E_t(\\xi) e^{-2\\xi}` for
    :math:`\\xi \\ge` :data:`TAIL_ENVELOPE_MIN_XI`

    Built from :math:`P - Q\\,S_M(2\\xi)` where :math:`S_M` is the
    asymptotic series of :math:`e^x E_1(x)` truncated after :math:`M`
    terms, so the cancellation between the two parts is kept. The
    series remainder is bounded by :math:`M!/x^{M+1}` for every
    :math:`x > 0`.
    """
    return _tail_envelope(_get_beta_index(idx))


@lru_cache(maxsize=None)
def _tail_envelope(idx: BetaIndex) -> Tuple[float, ...]:
    pair = TABLE[idx]
    if not any(c != 0 for c in pair.ei_part):
        return _envelope(idx)

    num_terms = len(pair.ei_part) + 1
    merged = defaultdict(Fraction)
    for i, c in enumerate(pair.exp_part):
        merged[i] += c
    for j, c in enumerate(pair.ei_part):
        for k in range(num_terms):
            merged[j - k - 1] -= c * F((-1) ** k * factorial(k), 2 ** (k + 1))

    xi_min = F(TAIL_ENVELOPE_MIN_XI)
    degree = max([m for m, c in merged.items() if m >= 0 and c != 0],
                 default=0)
    envelope = [0.0] * (degree + 1)
    constant = F(0)
    for m, c in merged.items():
        if c == 0:
            continue
        elif m >= 0:
            envelope[m] += abs(float(c))
        else:
            constant += abs(c) * xi_min ** m

    # Series remainder |Q(xi)| M! / (2 xi)^(M + 1), every power of xi in Q
    # lies below M + 1 so each term falls with xi
    scale = F(factorial(num_terms), 2 ** (num_terms + 1))
    for j, c in enumerate(pair.ei_part):
        constant += abs(c) * scale * xi_min ** (j - num_terms - 1)

    envelope[0] += float(constant)
    return tuple(envelope)


@lru_cache(maxsize=None)
def _float_coefficients(idx: BetaIndex) -> Tuple[np.ndarray, np.ndarray]:
    pair = TABLE[idx]
    return (np.array([float(c) for c in pair.exp_part]),
            np.array([float(c) for c in pair.ei_part]))


@lru_cache(maxsize=None)
def _asymptotic_coefficients(idx: BetaIndex) -> Tuple[np.ndarray, np.ndarray]:
    # Merge P with Q * Ei(2 xi) e^{2 xi} ~ -Q sum_k (-1)^k k! / (2 xi)^{k+1}
    pair = TABLE[idx]
    merged = defaultdict(Fraction)
    for i, c in enumerate(pair.exp_part):
        merged[i] += c
    for j, c in enumerate(pair.ei_part):
        if c == 0:
            continue
        for k in range(ASYMPTOTIC_TERMS + 1):
            merged[j - k - 1] -= c * F((-1) ** k * factorial(k), 2 ** (k + 1))

    # Split into polynomial in xi and polynomial in 1 / xi
    max_power = max(merged.keys())
    min_power = min(merged.keys())
    positive = np.array([float(merged.get(m, 0))
                         for m in range(0, max(max_power, 0) + 1)])
    negative = np.array([0.0] + [float(merged.get(-n, 0))
                                 for n in range(1, max(-min_power, 0) + 1)])
    return positive, negative


def _beta_direct(idx: BetaIndex, xi: np.ndarray) -> np.ndarray:
    exp_coeffs, ei_coeffs = _float_coefficients(idx)
    value = polynomial.polyval(xi, exp_coeffs) * np.exp(-2.0 * xi)

    # Ei part vanishes like xi^2 ln(xi) so xi = 0 contributes nothing
    if len(ei_coeffs) > 0:
        positive = (xi > 0.0)
        xi_pos = xi[positive]
        value[positive] += (polynomial.polyval(xi_pos, ei_coeffs)
                            * table_Ei(2.0 * xi_pos))
    return value


def _beta_asymptotic(idx: BetaIndex, xi: np.ndarray) -> np.ndarray:
    positive, negative = _asymptotic_coefficients(idx)
    merged = (polynomial.polyval(xi, positive)
              + polynomial.polyval(1.0 / xi, negative))
    return merged * np.exp(-2.0 * xi)


def _as_array(xi: ArrayLike) -> Tuple[np.ndarray, bool]:
    xi_arr = np.asarray(xi, dtype=float)
    scalar = (xi_arr.ndim == 0)
    xi_arr = np.atleast_1d(xi_arr)
    if not np.all(xi_arr >= 0.0):
        raise DomainError("Coefficient functions require xi >= 0")
    return xi_arr, scalar


def beta_eval(idx: BetaIndexType, xi: ArrayLike) -> Union[float, np.ndarray]:
    """Evaluate :math:`\\beta^{(p)}_q(\\xi)`

    Below :data:`CROSSOVER_XI` the table row is evaluated directly,
    above it with :func:`beta_eval_asymptotic`. :math:`\\xi = 0` gives
    the constant term of the exponential polynomial exactly.

    Args:
        idx:    coefficient index
        xi:     non-negative rescaled wave number(s)

    Returns:
        float for scalar ``xi``, otherwise an array of the same shape
    """
    idx = _get_beta_index(idx)
    xi_arr, scalar = _as_array(xi)

    result = np.empty_like(xi_arr)
    direct = (xi_arr < CROSSOVER_XI)
    if np.any(direct):
        result[direct] = _beta_direct(idx, xi_arr[direct])
    if not np.all(direct):
        result[~direct] = _beta_asymptotic(idx, xi_arr[~direct])
    return float(result[0]) if scalar else result


def beta_eval_asymptotic(idx: BetaIndexType,
                         xi: ArrayLike) -> Union[float, np.ndarray]:
    """Evaluate :math:`\\beta^{(p)}_q(\\xi)` from the merged asymptotic series

    Args:
        idx:    coefficient index
        xi:     rescaled wave number(s), at least :data:`ASYMPTOTIC_MIN_XI`
    """
    idx = _get_beta_index(idx)
    xi_arr, scalar = _as_array(xi)
    if not np.all(xi_arr >= ASYMPTOTIC_MIN_XI):
        raise DomainError(f"Asymptotic evaluation requires "
                          f"xi >= {ASYMPTOTIC_MIN_XI}")

    result = _beta_asymptotic(idx, xi_arr)
    return float(result[0]) if scalar else result
