"""Closed-form limits of the potential

At low temperature the Matsubara sums are expanded in powers of
:math:`\\tau` which gives polynomial coefficient functions
:math:`\\eta` of the dimensionless curvatures. In the opposite, classical,
limit only the zero Matsubara frequency survives and the potential in
units of :math:`k_B T / d^3` is a rational polynomial in the curvatures.
"""
import logging
import math

from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Optional, Tuple

from .beta_table import beta_at_zero
from .errors import ValidationError
from .geometry import LocalGeometry
from .model_preprocessor import (PolarizabilityType, _check_frames,
                                 _get_polarizability)
from .potential import _check_curvature, _check_retarded_tau
from .specfun import MATH_CONSTANTS
from .types import (BetaIndex, Channel, EnergyUnit, ExpansionOrder, Frame,
                    PotentialBreakdown, channel_matrix)

logger = logging.getLogger(__name__)

# Powers of pi scaling the odd zeta terms
_Z3 = MATH_CONSTANTS.zeta3 / math.pi ** 2
_Z5 = MATH_CONSTANTS.zeta5 / math.pi ** 4

# Monomials s1^a s2^b of the classical potential keyed by component
# **NOTE** bracket of U d^3 / (k_B T) = -1/2 {...}
CLASSICAL_COEFFICIENTS: Dict[str, Dict[Tuple[int, int], Fraction]] = {
    "xx": {(0, 0): Fraction(1, 8),
           (1, 0): Fraction(-9, 64), (0, 1): Fraction(-3, 64),
           (2, 0): Fraction(17, 128), (0, 2): Fraction(5, 128),
           (1, 1): Fraction(2, 128)},
    "yy": {(0, 0): Fraction(1, 8),
           (1, 0): Fraction(-3, 64), (0, 1): Fraction(-9, 64),
           (2, 0): Fraction(5, 128), (0, 2): Fraction(17, 128),
           (1, 1): Fraction(2, 128)},
    "zz": {(0, 0): Fraction(1, 4),
           (1, 0): Fraction(-1, 16), (0, 1): Fraction(-1, 16),
           (2, 0): Fraction(5, 64), (0, 2): Fraction(5, 64),
           (1, 1): Fraction(-2, 64)}}

# Coefficient of alpha_zi d^2 d_i(1/R1 + 1/R2) in the classical bracket
CLASSICAL_GRADIENT_COEFFICIENT = Fraction(1, 32)

_ORDER_OF_DEGREE = {0: ExpansionOrder.FLAT, 1: ExpansionOrder.CURVATURE1,
                    2: ExpansionOrder.CURVATURE2}


@dataclass(frozen=True)
class EtaCoefficients:
    """Low-temperature coefficients of the retarded potential

    The potential is :math:`U \\pi d^4 / \\hbar c = -[\\eta_\\perp
    \\alpha_\\perp + \\eta_{zz} \\alpha_{zz} + \\eta_{zi} \\alpha_{zi}
    + \\eta_{xy} (\\alpha_{xx} - \\alpha_{yy})]`.

    Attributes:
        eta_perp:   coefficient of :math:`\\alpha_\\perp`
        eta_zz:     coefficient of :math:`\\alpha_{zz}`
        eta_zi:     vector contracted with :math:`(\\alpha_{zx}, \\alpha_{zy})`
        eta_xy:     coefficient of :math:`\\alpha_{xx} - \\alpha_{yy}`
    """
    eta_perp: float
    eta_zz: float
    eta_zi: Tuple[float, float]
    eta_xy: float


def _eta_terms(s1: float, s2: float, tau: float,
               verbatim: bool) -> Dict[Tuple[ExpansionOrder, Channel], float]:
    t = tau
    s_sum = s1 + s2
    s_diff = s1 - s2
    s_sq_sum = s1 ** 2 + s2 ** 2
    s_sq_diff = s1 ** 2 - s2 ** 2

    # Published form of the perpendicular s^2 bracket lacks its tau^5 term
    perp_sq_sum_t5 = 0.0 if verbatim else 9.0 / 32.0 * _Z5 * t ** 5

    o = ExpansionOrder
    c = Channel
    return {
        (o.FLAT, c.PERP): 1.0 / 8.0 - t ** 4 / 360.0,
        (o.FLAT, c.ZZ): 1.0 / 8.0 + t ** 4 / 360.0,
        (o.CURVATURE1, c.PERP): -s_sum * (3.0 / 40.0
                                          - 3.0 / 32.0 * _Z5 * t ** 5),
        (o.CURVATURE1, c.ZZ): -s_sum * (1.0 / 15.0 - _Z3 / 8.0 * t ** 3
                                        + t ** 4 / 90.0
                                        - 3.0 / 16.0 * _Z5 * t ** 5),
        (o.CURVATURE1, c.XX_YY): -s_diff * (1.0 / 40.0
                                            + 3.0 / 64.0 * _Z5 * t ** 5),
        (o.GRADIENT, c.ZI): (1.0 / 30.0 - _Z3 / 16.0 * t ** 3
                             + t ** 4 / 180.0 - 3.0 / 32.0 * _Z5 * t ** 5),
        (o.CURVATURE2, c.PERP): (s_sum ** 2 * (3.0 / 280.0
                                               - 3.0 / 64.0 * _Z5 * t ** 5)
                                 + s_sq_sum * (13.0 / 280.0 + t ** 4 / 360.0
                                               - perp_sq_sum_t5)),
        (o.CURVATURE2, c.ZZ): (-s_sum ** 2 * (1.0 / 240.0 - t ** 2 / 45.0
                                              + _Z3 / 4.0 * t ** 3
                                              - t ** 4 / 60.0
                                              + 7.0 / 16.0 * _Z5 * t ** 5)
                               + s_sq_sum * (3.0 / 40.0 - t ** 2 / 90.0
                                             + t ** 4 / 180.0
                                             - _Z5 / 4.0 * t ** 5)),
        (o.CURVATURE2, c.XX_YY): s_sq_diff * (9.0 / 560.0 + t ** 4 / 360.0
                                              - 3.0 / 16.0 * _Z5 * t ** 5)}


def _require_principal(geom: LocalGeometry):
    if geom.frame != Frame.PRINCIPAL:
        raise ValidationError("Closed-form coefficients need a geometry in "
                              "the principal frame, see to_principal_frame")


def _check_tau(tau: float):
    if not (tau >= 0.0 and math.isfinite(tau)):
        raise ValidationError(f"tau must be finite and non-negative, "
                              f"not {tau}")


def eta_coefficients(geom: LocalGeometry, tau: float,
                     verbatim: bool = False) -> EtaCoefficients:
    """Low-temperature coefficients accurate to :math:`O(\\tau^6)`

    Args:
        geom:       principal-frame geometry
        tau:        dimensionless temperature :math:`d / \\lambda_T`
        verbatim:   drop the :math:`\\tau^5` term of the
                    :math:`(s_1^2 + s_2^2)` part of :math:`\\eta_\\perp`,
                    reproducing the commonly quoted form

    Raises:
        ValidationError: if ``geom`` is not in the principal frame
    """
    _require_principal(geom)
    _check_tau(tau)
    _check_retarded_tau(tau)
    _check_curvature(geom)

    s1, s2 = geom.dimensionless_curvatures
    gradient = geom.mean_curvature_gradient
    terms = _eta_terms(s1, s2, tau, verbatim)

    def channel_sum(channel):
        return math.fsum(v for (_, c), v in terms.items() if c == channel)

    zi_scale = channel_sum(Channel.ZI)
    return EtaCoefficients(
        eta_perp=channel_sum(Channel.PERP),
        eta_zz=channel_sum(Channel.ZZ),
        eta_zi=(zi_scale * gradient[0], zi_scale * gradient[1]),
        eta_xy=channel_sum(Channel.XX_YY))


def u_retarded(alpha: PolarizabilityType, geom: LocalGeometry, tau: float,
               verbatim: bool = False) -> PotentialBreakdown:
    """Low-temperature potential in units of :math:`\\hbar c / (\\pi d^4)`

    Args:
        alpha:      polarizability in the principal frame
        geom:       principal-frame geometry
        tau:        dimensionless temperature
        verbatim:   see :func:`eta_coefficients`
    """
    _require_principal(geom)
    _check_tau(tau)
    alpha = _get_polarizability(alpha)
    _check_frames(alpha, geom.frame)
    tau_ok, tau_messages = _check_retarded_tau(tau)
    curvature_ok, curvature_messages = _check_curvature(geom)

    s1, s2 = geom.dimensionless_curvatures
    gradient = geom.mean_curvature_gradient
    terms = _eta_terms(s1, s2, tau, verbatim)

    weights = {Channel.PERP: alpha.perp,
               Channel.ZZ: alpha.zz,
               Channel.ZI: float(alpha.zi @ gradient),
               Channel.XX_YY: alpha.anisotropy}
    contributions = channel_matrix({key: -value * weights[key[1]]
                                    for key, value in terms.items()})
    return PotentialBreakdown(contributions, EnergyUnit.QUANTUM, tau,
                              tau_in_range=tau_ok,
                              curvature_in_range=curvature_ok,
                              warnings=tau_messages + curvature_messages)


def _monomial_sum(coefficients: Dict[Tuple[int, int], Fraction], s1: float,
                  s2: float) -> Dict[ExpansionOrder, float]:
    sums = {order: 0.0 for order in _ORDER_OF_DEGREE.values()}
    for (a, b), c in coefficients.items():
        sums[_ORDER_OF_DEGREE[a + b]] += float(c) * s1 ** a * s2 ** b
    return sums


def u_classical(alpha: PolarizabilityType, geom: LocalGeometry,
                tau: Optional[float] = None) -> PotentialBreakdown:
    """Classical (zero Matsubara frequency) potential

    Args:
        alpha:  polarizability in the principal frame
        geom:   principal-frame geometry
        tau:    dimensionless temperature stored on the breakdown so it
                can be converted with :meth:`PotentialBreakdown.to_unit`

    Returns:
        breakdown in units of :math:`k_B T / d^3`
    """
    _require_principal(geom)
    alpha = _get_polarizability(alpha)
    _check_frames(alpha, geom.frame)
    curvature_ok, messages = _check_curvature(geom)

    s1, s2 = geom.dimensionless_curvatures
    gradient = geom.mean_curvature_gradient
    xx = _monomial_sum(CLASSICAL_COEFFICIENTS["xx"], s1, s2)
    yy = _monomial_sum(CLASSICAL_COEFFICIENTS["yy"], s1, s2)
    zz = _monomial_sum(CLASSICAL_COEFFICIENTS["zz"], s1, s2)

    values = {}
    for order in _ORDER_OF_DEGREE.values():
        values[order, Channel.PERP] = 0.5 * (xx[order] + yy[order]) * alpha.perp
        values[order, Channel.ZZ] = zz[order] * alpha.zz
        values[order, Channel.XX_YY] = (0.5 * (xx[order] - yy[order])
                                        * alpha.anisotropy)
    values[ExpansionOrder.GRADIENT, Channel.ZI] = (
        float(CLASSICAL_GRADIENT_COEFFICIENT) * float(alpha.zi @ gradient))

    contributions = -0.5 * channel_matrix(values)
    return PotentialBreakdown(contributions, EnergyUnit.THERMAL,
                              math.nan if tau is None else tau,
                              curvature_in_range=curvature_ok,
                              warnings=messages)


def classical_coefficients() -> Dict[str, Dict[Tuple[int, int], Fraction]]:
    """Copy of :data:`CLASSICAL_COEFFICIENTS`"""
    return {k: dict(v) for k, v in CLASSICAL_COEFFICIENTS.items()}


def classical_from_beta() -> Dict[str, Dict[Tuple[int, int], Fraction]]:
    """Classical monomial coefficients rebuilt from :math:`\\beta(0)`

    With only the zero frequency in the sum the bracket takes
    :math:`\\beta^{(p)}_q(0)` in place of each coefficient, which
    expanded in :math:`s_1, s_2` must reproduce
    :data:`CLASSICAL_COEFFICIENTS`.
    """
    b = lambda p, q=1: beta_at_zero(BetaIndex(p, q))
    half = Fraction(1, 2)

    # Coefficients multiplying alpha_perp = alpha_xx + alpha_yy and
    # alpha_xx - alpha_yy, as polynomials in (s1, s2)
    perp = {(0, 0): b(0, 1), (1, 0): b(2, 1), (0, 1): b(2, 1),
            (2, 0): b(4, 1) + b(4, 3), (0, 2): b(4, 1) + b(4, 3),
            (1, 1): 2 * b(4, 1)}
    aniso = {(1, 0): half * b(2, 3), (0, 1): -half * b(2, 3),
             (2, 0): half * b(4, 5), (0, 2): -half * b(4, 5)}
    zz = {(0, 0): b(0, 2), (1, 0): b(2, 2), (0, 1): b(2, 2),
          (2, 0): b(4, 2) + b(4, 4), (0, 2): b(4, 2) + b(4, 4),
          (1, 1): 2 * b(4, 2)}

    monomials = sorted(set(perp) | set(aniso))
    return {"xx": {m: perp.get(m, 0) + aniso.get(m, 0) for m in monomials},
            "yy": {m: perp.get(m, 0) - aniso.get(m, 0) for m in monomials},
            "zz": zz}
