"""Finite-temperature potential assembled from the thermal coefficients

The potential is

.. math::

    U = -\\frac{k_B T}{d^3} \\sum_{n}{}' \\{\\dots\\}
      = -\\frac{\\hbar c}{2 \\pi d^4} \\{\\dots\\}_{\\beta \\to \\tilde\\beta}

so in units of :math:`\\hbar c/(\\pi d^4)` the energy is minus half the
bracket evaluated with the thermal coefficients. The same expression
holds at zero temperature with the integrals in place of the sums.
"""
import logging
import numpy as np

from dataclasses import dataclass
from scipy.spatial.transform import Rotation
from typing import Dict, List, Sequence, Tuple, Union
from warnings import warn

from .errors import ValidityWarning, ValidationError
from .geometry import LocalGeometry
from .model_preprocessor import (PolarizabilityType, _check_frames,
                                 _get_polarizability)
from .thermal import ThermalConfig, beta_tilde_table
from .types import (BetaIndex, Channel, EnergyUnit, ExpansionOrder, Frame,
                    PolarizabilityTensor, PotentialBreakdown, channel_matrix)

logger = logging.getLogger(__name__)

# Heuristic limits of the expansions, exceeding them raises a warning
MAX_CURVATURE_RATIO = 0.5
MAX_RETARDED_TAU = 0.3

# Relative tolerance used when picking the first of several equal minima
ARGMIN_REL_TOL = 1e-12

# Type aliases
CoefficientTable = Dict[BetaIndex, float]
AngleType = Union[float, Tuple[float, float], Rotation]


def _check_curvature(geom: LocalGeometry) -> Tuple[bool, List[str]]:
    ratio = geom.max_curvature_ratio()
    if ratio > MAX_CURVATURE_RATIO:
        message = (f"|d/R| = {ratio:g} exceeds {MAX_CURVATURE_RATIO}, "
                   f"the curvature expansion may be inaccurate")
        warn(message, ValidityWarning)
        return False, [message]
    else:
        return True, []


def _check_retarded_tau(tau: float) -> Tuple[bool, List[str]]:
    if tau > MAX_RETARDED_TAU:
        message = (f"tau = {tau:g} exceeds {MAX_RETARDED_TAU}, the "
                   f"low-temperature expansion may be inaccurate")
        warn(message, ValidityWarning)
        return False, [message]
    else:
        return True, []


def _assemble_principal(beta: CoefficientTable, alpha: PolarizabilityTensor,
                        geom: LocalGeometry) -> np.ndarray:
    # Bracket of the expansion in the principal radii of curvature
    b = lambda p, q=1: beta[BetaIndex(p, q)]
    s1, s2 = geom.dimensionless_curvatures
    gradient = geom.mean_curvature_gradient

    s_sum = s1 + s2
    s_diff = s1 - s2
    s_sq_sum = s1 ** 2 + s2 ** 2
    s_sq_diff = s1 ** 2 - s2 ** 2

    o = ExpansionOrder
    c = Channel
    return channel_matrix({
        (o.FLAT, c.PERP): b(0, 1) * alpha.perp,
        (o.FLAT, c.ZZ): b(0, 2) * alpha.zz,
        (o.CURVATURE1, c.PERP): s_sum * b(2, 1) * alpha.perp,
        (o.CURVATURE1, c.ZZ): s_sum * b(2, 2) * alpha.zz,
        (o.CURVATURE1, c.XX_YY): 0.5 * b(2, 3) * s_diff * alpha.anisotropy,
        (o.GRADIENT, c.ZI): b(3) * float(alpha.zi @ gradient),
        (o.CURVATURE2, c.PERP): ((s_sum ** 2 * b(4, 1) + s_sq_sum * b(4, 3))
                                 * alpha.perp),
        (o.CURVATURE2, c.ZZ): ((s_sum ** 2 * b(4, 2) + s_sq_sum * b(4, 4))
                               * alpha.zz),
        (o.CURVATURE2, c.XX_YY): (0.5 * b(4, 5) * s_sq_diff
                                  * alpha.anisotropy)})


def _assemble_general(beta: CoefficientTable, alpha: PolarizabilityTensor,
                      geom: LocalGeometry) -> np.ndarray:
    # Bracket of the rotation-invariant expansion in height derivatives
    b = lambda p, q=1: beta[BetaIndex(p, q)]
    hessian = geom.dimensionless_hessian
    gradient = geom.mean_curvature_gradient

    laplacian = np.trace(hessian)
    traceless = hessian - 0.5 * laplacian * np.eye(2)
    hessian_sq = float(np.sum(hessian * hessian))
    traceless_alpha = float(np.sum(traceless * alpha.in_plane))

    o = ExpansionOrder
    c = Channel
    return channel_matrix({
        (o.FLAT, c.PERP): b(0, 1) * alpha.perp,
        (o.FLAT, c.ZZ): b(0, 2) * alpha.zz,
        (o.CURVATURE1, c.PERP): b(2, 1) * laplacian * alpha.perp,
        (o.CURVATURE1, c.ZZ): b(2, 2) * laplacian * alpha.zz,
        (o.CURVATURE1, c.XX_YY): b(2, 3) * traceless_alpha,
        (o.GRADIENT, c.ZI): b(3) * float(alpha.zi @ gradient),
        (o.CURVATURE2, c.PERP): ((laplacian ** 2 * b(4, 1)
                                  + hessian_sq * b(4, 3)) * alpha.perp),
        (o.CURVATURE2, c.ZZ): ((laplacian ** 2 * b(4, 2)
                                + hessian_sq * b(4, 4)) * alpha.zz),
        (o.CURVATURE2, c.XX_YY): b(4, 5) * laplacian * traceless_alpha})


def assemble_bracket(beta: CoefficientTable, alpha: PolarizabilityTensor,
                     geom: LocalGeometry) -> np.ndarray:
    """Contract coefficients with geometry and polarizability

    Principal-frame geometries use the expansion in radii of curvature,
    general-frame geometries the rotation-invariant one.

    Returns:
        bracket contributions indexed by order and channel
    """
    _check_frames(alpha, geom.frame)
    if geom.frame == Frame.PRINCIPAL:
        return _assemble_principal(beta, alpha, geom)
    else:
        return _assemble_general(beta, alpha, geom)


def u_full(alpha: PolarizabilityType, geom: LocalGeometry,
           cfg: ThermalConfig) -> PotentialBreakdown:
    """Potential from the full Matsubara sums

    At ``cfg.tau == 0`` the zero-temperature integrals are used, giving the
    pure quantum potential.

    Args:
        alpha:  polarizability in the frame of ``geom``
        geom:   local geometry
        cfg:    thermal configuration

    Returns:
        breakdown in units of :math:`\\hbar c/(\\pi d^4)`

    Raises:
        ValidationError:    if ``alpha`` is tagged with another frame
        ConvergenceError:   if a Matsubara sum fails to converge
    """
    alpha = _get_polarizability(alpha)
    _check_frames(alpha, geom.frame)
    curvature_ok, messages = _check_curvature(geom)

    bracket = assemble_bracket(beta_tilde_table(cfg), alpha, geom)
    return PotentialBreakdown(-0.5 * bracket, EnergyUnit.QUANTUM, cfg.tau,
                              curvature_in_range=curvature_ok,
                              warnings=messages)


# ----------------------------------------------------------------------------
# Orientation scan
# ----------------------------------------------------------------------------
@dataclass(frozen=True)
class OrientationSample:
    """Energy of the particle at one orientation

    Attributes:
        theta:  polar tilt of the body z axis about y [rad]
        phi:    azimuthal rotation about the surface normal [rad]
        energy: potential in units of :math:`\\hbar c/(\\pi d^4)`
    """
    theta: float
    phi: float
    energy: float


@dataclass(frozen=True)
class OrientationScan:
    samples: Tuple[OrientationSample, ...]
    argmin: int

    @property
    def minimum(self) -> OrientationSample:
        return self.samples[self.argmin]


def _resolve_rotation(angle: AngleType) -> Tuple[float, float, np.ndarray]:
    if isinstance(angle, Rotation):
        # Extra turn about x, if any, is kept in the matrix only
        theta, phi, _ = angle.as_euler("yzx")
        return theta, phi, angle.as_matrix()
    elif np.ndim(angle) == 0:
        theta, phi = 0.0, float(angle)
    else:
        theta, phi = (float(a) for a in angle)

    # Tilt about y, then turn about the surface normal
    matrix = Rotation.from_euler("yz", [theta, phi]).as_matrix()
    return theta, phi, matrix


def first_argmin(energies: Sequence[float]) -> int:
    """Index of the first energy within :data:`ARGMIN_REL_TOL` of the minimum"""
    minimum = min(energies)
    threshold = minimum + ARGMIN_REL_TOL * abs(minimum)
    return next(i for i, e in enumerate(energies) if e <= threshold)


def orientation_scan(alpha_body: PolarizabilityType, geom: LocalGeometry,
                     cfg: ThermalConfig,
                     angle_grid: Sequence[AngleType]) -> OrientationScan:
    """Potential of a rotated anisotropic particle

    Args:
        alpha_body: polarizability in the particle's body frame
        geom:       local geometry
        cfg:        thermal configuration
        angle_grid: orientations, each an in-plane angle ``phi``, a
                    ``(theta, phi)`` pair or a :class:`Rotation`

    Returns:
        energies in grid order and the index of the lowest one,
        ties going to the first grid point
    """
    if len(angle_grid) == 0:
        raise ValidationError("Orientation grid must not be empty")

    alpha_body = _get_polarizability(alpha_body)
    samples = []
    for angle in angle_grid:
        theta, phi, matrix = _resolve_rotation(angle)
        alpha_lab = alpha_body.rotated(matrix, frame=geom.frame)
        energy = u_full(alpha_lab, geom, cfg).total
        samples.append(OrientationSample(theta, phi, energy))

    argmin = first_argmin([s.energy for s in samples])
    logger.debug("Lowest energy %g at theta=%g, phi=%g", samples[argmin].energy,
                 samples[argmin].theta, samples[argmin].phi)
    return OrientationScan(tuple(samples), argmin)
