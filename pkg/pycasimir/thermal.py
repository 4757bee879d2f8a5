"""Matsubara sums of the coefficient functions and their limits

With :math:`\\tau = d/\\lambda_T` the thermal coefficients are

.. math::

    \\tilde\\beta(\\tau) = \\tau \\Big[\\tfrac{1}{2}\\beta(0)
        + \\sum_{n \\ge 1} \\beta(n\\tau)\\Big]

which tend to :math:`\\int_0^\\infty \\beta(\\xi)\\,d\\xi` as
:math:`\\tau \\to 0` and to :math:`\\tau\\beta(0)/2` as
:math:`\\tau \\to \\infty`. The half weight of the :math:`n = 0` term lives
here; the classical free energy in :mod:`.eta_retarded` applies its own.
"""
import logging
import math
import numpy as np

from dataclasses import dataclass, replace
from fractions import Fraction
from functools import lru_cache
from numpy.polynomial import polynomial
from typing import Dict, List, Sequence, Tuple

from . import constants
from .beta_table import (TAIL_ENVELOPE_MIN_XI, beta_at_zero, beta_envelope,
                         beta_eval, beta_poly, beta_tail_envelope,
                         beta_T0_exact)
from .errors import ConvergenceError, DomainError, ValidationError
from .model_preprocessor import BetaIndexType, _get_beta_index
from .specfun import MATH_CONSTANTS, quad_halfline
from .types import ALL_INDICES, BetaIndex

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class ThermalConfig:
    """Temperature and summation controls

    Args:
        tau:            dimensionless temperature :math:`d/\\lambda_T`,
                        zero selects the zero-temperature integrals
        sum_rel_tol:    truncation tolerance of the Matsubara sums relative
                        to the sum of term magnitudes
        max_terms:      maximum number of Matsubara terms
        quad_rel_tol:   relative tolerance of the zero-temperature integrals
    """
    tau: float = 0.0
    sum_rel_tol: float = 1e-12
    max_terms: int = 10 ** 6
    quad_rel_tol: float = 1e-11

    def __post_init__(self):
        if not (math.isfinite(self.tau) and self.tau >= 0.0):
            raise ValidationError("tau must be finite and non-negative")
        if not (1e-16 <= self.sum_rel_tol < 1e-2):
            raise ValidationError("sum_rel_tol must lie in [1e-16, 1e-2)")
        if not (1e-14 < self.quad_rel_tol < 1e-3):
            raise ValidationError("quad_rel_tol must lie in (1e-14, 1e-3)")
        if self.max_terms < 2:
            raise ValidationError("max_terms must be at least 2")

    @classmethod
    def from_temperature(cls, d: float, temperature: float,
                         **kwargs) -> "ThermalConfig":
        """Configuration at ``temperature`` [K] and separation ``d`` [m]"""
        return cls(constants.tau_from_temperature(d, temperature), **kwargs)

    def with_tau(self, tau: float) -> "ThermalConfig":
        return replace(self, tau=tau)


@dataclass(frozen=True)
class BetaSumResult:
    """Outcome of a Matsubara sum

    Attributes:
        value:              :math:`\\tilde\\beta(\\tau)`
        terms_used:         number of Matsubara terms including n = 0
        truncation_bound:   rigorous bound on the neglected tail
        scale:              :math:`\\tau \\sum |\\beta(n\\tau)|` over the
                            included terms, equal to ``abs(value)`` when no
                            terms cancel
    """
    value: float
    terms_used: int
    truncation_bound: float
    scale: float


def _tail_bound(envelope: np.ndarray, n: np.ndarray, tau: float,
                decay: float) -> np.ndarray:
    # Envelope of the first neglected term and ratio bound beyond it
    following = (n + 1.0) * tau
    g_next = (polynomial.polyval(following, envelope)
              * np.exp(-2.0 * following))
    ratio = ((n + 2.0) / (n + 1.0)) ** (len(envelope) - 1) * decay
    with np.errstate(divide="ignore", invalid="ignore"):
        return np.where(ratio < 1.0, g_next / (1.0 - ratio), np.inf)


def matsubara_beta_sum(idx: BetaIndexType, cfg: ThermalConfig) -> BetaSumResult:
    """Primed Matsubara sum :math:`\\tilde\\beta^{(p)}_q(\\tau)`

    Terms are evaluated in vectorised chunks. After each term the tail is
    bounded by the geometric series of the coefficient's envelope
    :math:`E(n\\tau)e^{-2n\\tau}`, switching to :func:`beta_tail_envelope`
    once the tail lies beyond its range of validity, and the sum stops at the first term where
    the bound drops below ``cfg.sum_rel_tol`` times the accumulated
    magnitude.

    Args:
        idx:    coefficient index
        cfg:    thermal configuration with ``tau > 0``

    Raises:
        DomainError:        if ``cfg.tau`` is zero, use
                            :func:`beta_T0_integral` instead
        ConvergenceError:   if ``cfg.max_terms`` terms do not suffice
    """
    idx = _get_beta_index(idx)
    tau = cfg.tau
    if not tau > 0.0:
        raise DomainError("Matsubara sum requires tau > 0, "
                          "use beta_T0_integral at zero temperature")

    envelope = np.asarray(beta_envelope(idx))
    tail_envelope = np.asarray(beta_tail_envelope(idx))
    decay = math.exp(-2.0 * tau)

    beta_0 = float(beta_at_zero(idx))
    terms = [0.5 * beta_0]
    magnitude = 0.5 * abs(beta_0)

    chunk = int(math.ceil(8.0 / tau)) + 16
    n_start = 1
    while n_start < cfg.max_terms:
        n = np.arange(n_start, min(n_start + chunk, cfg.max_terms),
                      dtype=float)
        values = beta_eval(idx, n * tau)
        cumulative = magnitude + np.cumsum(np.abs(values))

        # Past TAIL_ENVELOPE_MIN_XI the tail is bounded with the envelope
        # that keeps the cancellation between the two parts of the row
        following = (n + 1.0) * tau
        bound = np.where(following >= TAIL_ENVELOPE_MIN_XI,
                         _tail_bound(tail_envelope, n, tau, decay),
                         _tail_bound(envelope, n, tau, decay))

        converged = (bound <= cfg.sum_rel_tol * cumulative)
        if np.any(converged):
            last = int(np.argmax(converged))
            terms.extend(values[:last + 1].tolist())
            terms_used = int(n[last]) + 1
            logger.debug("Sum %s at tau=%g converged with %d terms",
                         idx, tau, terms_used)
            return BetaSumResult(value=tau * math.fsum(terms),
                                 terms_used=terms_used,
                                 truncation_bound=tau * float(bound[last]),
                                 scale=tau * math.fsum(abs(t) for t in terms))

        terms.extend(values.tolist())
        magnitude = float(cumulative[-1])
        n_start = int(n[-1]) + 1

    partial = tau * math.fsum(terms)
    raise ConvergenceError(f"Matsubara sum {idx} at tau={tau} did not "
                           f"converge within {cfg.max_terms} terms",
                           estimate=partial, terms_used=len(terms))


def beta_T0_integral(idx: BetaIndexType, rel_tol: float = 1e-11) -> float:
    """Zero-temperature limit :math:`\\int_0^\\infty \\beta^{(p)}_q(\\xi)\\,d\\xi`
    evaluated by quadrature

    Args:
        idx:        coefficient index
        rel_tol:    relative tolerance of the quadrature
    """
    return _beta_T0_integral(_get_beta_index(idx), rel_tol)


@lru_cache(maxsize=None)
def _beta_T0_integral(idx: BetaIndex, rel_tol: float) -> float:
    return quad_halfline(lambda xi: beta_eval(idx, xi), rel_tol,
                         envelope=beta_envelope(idx))


def beta_classical(idx: BetaIndexType) -> Fraction:
    """Exact :math:`\\beta^{(p)}_q(0)`, the n = 0 Matsubara term"""
    return beta_at_zero(idx)


def beta_tilde(idx: BetaIndexType, cfg: ThermalConfig) -> float:
    """:math:`\\tilde\\beta^{(p)}_q` at ``cfg.tau``, integral at zero"""
    if cfg.tau == 0.0:
        return beta_T0_integral(idx, cfg.quad_rel_tol)
    else:
        return matsubara_beta_sum(idx, cfg).value


@lru_cache(maxsize=256)
def beta_tilde_table(cfg: ThermalConfig) -> Dict[BetaIndex, float]:
    """All thermal coefficients at one configuration

    Results are cached per configuration; the returned mapping
    must be treated as read-only.
    """
    return {idx: beta_tilde(idx, cfg) for idx in ALL_INDICES}


def normalized_beta_curve(idx: BetaIndexType, tau_grid: Sequence[float],
                          sum_rel_tol: float = 1e-12,
                          max_terms: int = 10 ** 6,
                          quad_rel_tol: float = 1e-11) -> List[Tuple[float, float]]:
    """Thermal coefficient normalised to its zero-temperature value

    Args:
        idx:            coefficient index
        tau_grid:       strictly positive, sorted dimensionless temperatures
        sum_rel_tol:    truncation tolerance of the sums
        max_terms:      maximum number of Matsubara terms
        quad_rel_tol:   tolerance of the zero-temperature integral

    Returns:
        list of ``(tau, beta_tilde(tau) / beta_tilde(0))``
    """
    idx = _get_beta_index(idx)
    tau_grid = [float(t) for t in tau_grid]
    if any(not t > 0.0 for t in tau_grid):
        raise DomainError("tau grid must be strictly positive")
    if any(b < a for a, b in zip(tau_grid[:-1], tau_grid[1:])):
        raise DomainError("tau grid must be sorted")

    zero_temperature = beta_T0_integral(idx, quad_rel_tol)
    if zero_temperature == 0.0:
        raise DomainError(f"Coefficient {idx} integrates to zero "
                          f"and cannot be normalised")

    cfg = ThermalConfig(sum_rel_tol=sum_rel_tol, max_terms=max_terms,
                        quad_rel_tol=quad_rel_tol)
    return [(t, matsubara_beta_sum(idx, cfg.with_tau(t)).value
             / zero_temperature)
            for t in tau_grid]


# Euler-Maclaurin weights -B_2k / 2k of tau^2k f^(2k-1)(0) / (2k-1)!
_EULER_MACLAURIN_WEIGHTS = {2: Fraction(-1, 12), 4: Fraction(1, 120),
                            6: Fraction(-1, 252)}


def _taylor_coefficients(idx: BetaIndex, degree: int) -> List[Fraction]:
    # Taylor coefficients of P e^{-2 xi} + Q * (Ei(2 xi) - gamma - ln(2 xi))
    pair = beta_poly(idx)
    exp_series = [Fraction((-2) ** k, math.factorial(k))
                  for k in range(degree + 1)]
    ei_series = [Fraction(0)] + [Fraction((-2) ** k, k * math.factorial(k))
                                 for k in range(1, degree + 1)]
    taylor = [Fraction(0)] * (degree + 1)
    for series, poly in ((exp_series, pair.exp_part),
                         (ei_series, pair.ei_part)):
        for i, c in enumerate(poly):
            for j in range(degree + 1 - i):
                taylor[i + j] += c * series[j]
    return taylor


@lru_cache(maxsize=None)
def _low_temperature_coefficients(idx: BetaIndex) -> Dict[int, float]:
    pair = beta_poly(idx)
    taylor = _taylor_coefficients(idx, 5)

    coefficients = {0: float(beta_T0_exact(idx))}
    for power, weight in _EULER_MACLAURIN_WEIGHTS.items():
        coefficients[power] = float(weight * taylor[power - 1])

    # Logarithmic part Q(xi) ln(xi) contributes -zeta'(-j) tau^(j + 1)
    q = list(pair.ei_part) + [Fraction(0)] * (7 - len(pair.ei_part))
    pi = math.pi
    coefficients[3] = (float(q[2]) * MATH_CONSTANTS.zeta3 / (4.0 * pi ** 2))
    coefficients[5] = (-float(q[4]) * 3.0 * MATH_CONSTANTS.zeta5
                       / (4.0 * pi ** 4))
    coefficients[7] = (float(q[6]) * 45.0 * MATH_CONSTANTS.zeta7
                       / (8.0 * pi ** 6))
    return coefficients


def beta_tilde_low_temperature(idx: BetaIndexType, tau: float,
                               max_order: int = 5) -> float:
    """Small-:math:`\\tau` expansion of :math:`\\tilde\\beta^{(p)}_q`

    Analytic parts follow the Euler-Maclaurin formula, the
    :math:`\\xi^{2k}\\ln\\xi` parts of the Ei term give odd powers with
    :math:`\\zeta(2k+1)` coefficients.

    Args:
        idx:        coefficient index
        tau:        dimensionless temperature
        max_order:  highest power of ``tau`` kept, at most 7
    """
    if not 0 <= max_order <= 7:
        raise DomainError("Expansion is available up to tau^7")
    if not tau >= 0.0:
        raise DomainError("tau must be non-negative")

    coefficients = _low_temperature_coefficients(_get_beta_index(idx))
    return math.fsum(c * tau ** power for power, c in coefficients.items()
                     if power <= max_order)
