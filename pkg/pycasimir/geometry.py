"""Local surface geometry at the point closest to the particle

The surface is described by its height :math:`H(x, y)` above the plane
through the particle parallel to the tangent plane at the foot point, so
:math:`H(0) = d` and :math:`\\nabla H(0) = 0`. Positive curvature means the
surface bends away from the particle (outside of a sphere or cylinder),
negative curvature that it bends towards it (inside a bowl). Curvatures
rather than radii are stored so a flat direction is simply zero.
"""
import logging
import math
import numpy as np

from dataclasses import dataclass, field
from enum import Enum
from typing import Dict, Optional, Tuple
from warnings import warn

from .errors import StencilError, ValidationError, ValidityWarning
from .types import Frame, PolarizabilityTensor

logger = logging.getLogger(__name__)

# Half-width of the finite-difference window around the foot point
STENCIL_HALF_WIDTH = 3

# Relative gradient at a grid foot point above which a warning is raised
FOOT_GRADIENT_TOL = 1e-3

# Relative tolerance for treating a Hessian as umbilic or diagonal
_DEGENERACY_TOL = 1e-14


@dataclass
class LocalGeometry:
    """Separation and height-profile derivatives at the foot point

    Args:
        d:              particle-surface separation (> 0)
        hessian:        :math:`\\partial_i \\partial_j H` [1/length]
        grad_lap:       :math:`\\partial_i \\nabla^2 H` [1/length^2]
        frame:          frame the derivatives are expressed in
        axis_angle:     angle of the frame's x axis in the frame the
                        profile was specified in [rad]
        hessian_error:  finite-difference error estimate of ``hessian``
        grad_lap_error: finite-difference error estimate of ``grad_lap``
    """
    d: float
    hessian: np.ndarray = field(default_factory=lambda: np.zeros((2, 2)))
    grad_lap: np.ndarray = field(default_factory=lambda: np.zeros(2))
    frame: Frame = Frame.GENERAL
    axis_angle: float = 0.0
    hessian_error: Optional[np.ndarray] = None
    grad_lap_error: Optional[np.ndarray] = None

    def __post_init__(self):
        if not (math.isfinite(self.d) and self.d > 0.0):
            raise ValidationError("Separation d must be positive")

        self.hessian = np.array(self.hessian, dtype=float)
        self.grad_lap = np.array(self.grad_lap, dtype=float)
        if self.hessian.shape != (2, 2) or self.grad_lap.shape != (2,):
            raise ValidationError("Hessian must be 2x2 and grad_lap a 2-vector")
        if not (np.all(np.isfinite(self.hessian))
                and np.all(np.isfinite(self.grad_lap))):
            raise ValidationError("Height-profile derivatives must be finite")

        scale = np.max(np.abs(self.hessian))
        if abs(self.hessian[0, 1] - self.hessian[1, 0]) > 1e-12 * scale:
            raise ValidationError("Hessian must be symmetric")
        if (self.frame == Frame.PRINCIPAL
                and abs(self.hessian[0, 1]) > _DEGENERACY_TOL * scale):
            raise ValidationError("Principal-frame Hessian must be diagonal")

    @classmethod
    def principal(cls, d: float, R1: float = math.inf, R2: float = math.inf,
                  grad_lap=(0.0, 0.0)) -> "LocalGeometry":
        """Geometry from signed principal radii

        Args:
            d:          particle-surface separation
            R1:         signed radius along x, ``math.inf`` if flat
            R2:         signed radius along y, ``math.inf`` if flat
            grad_lap:   :math:`\\partial_i (1/R_1 + 1/R_2)` along the
                        principal axes
        """
        if R1 == 0.0 or R2 == 0.0:
            raise ValidationError("Radii of curvature must be non-zero")
        return cls(d, np.diag([1.0 / R1, 1.0 / R2]), grad_lap,
                   frame=Frame.PRINCIPAL)

    @classmethod
    def from_dimensionless(cls, d_over_R1: float, d_over_R2: float,
                           gradient=(0.0, 0.0)) -> "LocalGeometry":
        """Principal geometry at unit separation from
        :math:`d/R_1`, :math:`d/R_2` and :math:`d^2 \\partial_i(1/R_1 + 1/R_2)`"""
        return cls(1.0, np.diag([d_over_R1, d_over_R2]), gradient,
                   frame=Frame.PRINCIPAL)

    @property
    def laplacian(self) -> float:
        """:math:`\\nabla^2 H`, the sum of principal curvatures"""
        return self.hessian[0, 0] + self.hessian[1, 1]

    @property
    def curvatures(self) -> Tuple[float, float]:
        """Principal curvatures, diagonal entries in the principal frame"""
        if self.frame == Frame.PRINCIPAL:
            return (self.hessian[0, 0], self.hessian[1, 1])
        else:
            k1, k2, _ = _principal_decomposition(self.hessian)
            return (k1, k2)

    @property
    def radii(self) -> Tuple[float, float]:
        """Signed principal radii, infinite along flat directions"""
        return tuple(math.inf if k == 0.0 else 1.0 / k
                     for k in self.curvatures)

    @property
    def dimensionless_hessian(self) -> np.ndarray:
        return self.d * self.hessian

    @property
    def dimensionless_curvatures(self) -> Tuple[float, float]:
        """:math:`(d/R_1, d/R_2)`"""
        k1, k2 = self.curvatures
        return (self.d * k1, self.d * k2)

    @property
    def mean_curvature_gradient(self) -> np.ndarray:
        """:math:`d^2 \\partial_i \\nabla^2 H`"""
        return self.d ** 2 * self.grad_lap

    def max_curvature_ratio(self) -> float:
        """Largest :math:`|d/R_i|`"""
        return max(abs(s) for s in self.dimensionless_curvatures)


def _principal_decomposition(hessian: np.ndarray) -> Tuple[float, float, float]:
    # Closed-form eigen-decomposition of a symmetric 2x2 matrix. Returns
    # k1 <= k2 and the angle of the k1 eigenvector in (-pi/2, pi/2]
    a, b, c = hessian[0, 0], hessian[0, 1], hessian[1, 1]
    mean = 0.5 * (a + c)
    half_diff = 0.5 * (a - c)
    radius = math.hypot(half_diff, b)
    k1 = mean - radius
    k2 = mean + radius

    scale = max(abs(a), abs(b), abs(c))
    if radius <= _DEGENERACY_TOL * scale:
        # Umbilic point, any axes are principal
        return k1, k2, 0.0

    # Angle of the larger eigenvalue's eigenvector, rotated by 90 degrees
    angle = 0.5 * math.atan2(2.0 * b, a - c) + 0.5 * math.pi
    if angle > 0.5 * math.pi:
        angle -= math.pi
    return k1, k2, angle


def _in_plane_rotation(angle: float) -> np.ndarray:
    cos_a = math.cos(angle)
    sin_a = math.sin(angle)
    return np.array([[cos_a, -sin_a], [sin_a, cos_a]])


def to_principal_frame(geom: LocalGeometry, alpha: PolarizabilityTensor
                       ) -> Tuple[LocalGeometry, PolarizabilityTensor]:
    """Rotate geometry and polarizability onto the principal axes

    The new x axis follows the smaller curvature so that
    :math:`1/R_1 \\le 1/R_2`. An umbilic point keeps its axes.

    Args:
        geom:   geometry in the general frame
        alpha:  polarizability in the same frame

    Returns:
        geometry and polarizability in the principal frame
    """
    if geom.frame == Frame.PRINCIPAL:
        return geom, alpha.with_frame(Frame.PRINCIPAL)

    k1, k2, angle = _principal_decomposition(geom.hessian)
    rotation = _in_plane_rotation(angle)

    # Columns of the rotation are the principal axes
    rotation_3d = np.eye(3)
    rotation_3d[:2, :2] = rotation

    principal_geom = LocalGeometry(
        geom.d, np.diag([k1, k2]), rotation.T @ geom.grad_lap,
        frame=Frame.PRINCIPAL, axis_angle=geom.axis_angle + angle,
        hessian_error=(None if geom.hessian_error is None
                       else np.abs(rotation.T) @ geom.hessian_error
                       @ np.abs(rotation)),
        grad_lap_error=(None if geom.grad_lap_error is None
                        else np.abs(rotation.T) @ geom.grad_lap_error))
    principal_alpha = PolarizabilityTensor(
        rotation_3d.T @ alpha.components @ rotation_3d, Frame.PRINCIPAL)

    logger.debug("Principal axes at %g rad, curvatures %g and %g",
                 angle, k1, k2)
    return principal_geom, principal_alpha


# ----------------------------------------------------------------------------
# Surface profiles
# ----------------------------------------------------------------------------
class ProfileKind(Enum):
    PLANE = "plane"
    SPHERE = "sphere"
    CYLINDER = "cylinder"
    CORRUGATION = "corrugation"
    POLYNOMIAL = "polynomial"
    GRID = "grid"


@dataclass
class SurfaceProfile:
    """Surface shape around the foot point

    Use the ``plane``, ``sphere``, ``cylinder``, ``corrugation``,
    ``polynomial`` and ``grid`` constructors rather than building this
    directly. All lengths share one unit with the separation ``d``.
    """
    kind: ProfileKind
    radius: float = math.inf
    axis_angle: float = 0.0
    amplitude: float = 0.0
    period: float = math.inf
    coefficients: Dict[Tuple[int, int], float] = field(default_factory=dict)
    spacing: float = 0.0
    values: Optional[np.ndarray] = None
    foot_index: Optional[Tuple[int, int]] = None

    @classmethod
    def plane(cls) -> "SurfaceProfile":
        return cls(ProfileKind.PLANE)

    @classmethod
    def sphere(cls, radius: float) -> "SurfaceProfile":
        """Sphere of ``radius`` with the particle outside on its axis"""
        if not radius > 0.0:
            raise ValidationError("Sphere radius must be positive")
        return cls(ProfileKind.SPHERE, radius=radius)

    @classmethod
    def cylinder(cls, radius: float,
                 axis_angle: float = 0.5 * math.pi) -> "SurfaceProfile":
        """Cylinder of ``radius`` whose axis makes ``axis_angle`` with x

        The default axis runs along y.
        """
        if not radius > 0.0:
            raise ValidationError("Cylinder radius must be positive")
        return cls(ProfileKind.CYLINDER, radius=radius, axis_angle=axis_angle)

    @classmethod
    def corrugation(cls, amplitude: float, period: float,
                    angle: float = 0.0) -> "SurfaceProfile":
        """Sinusoidal corrugation :math:`A(1 - \\cos(2\\pi u/\\Lambda))`

        ``u`` runs along the direction at ``angle`` to x and the
        particle sits above a trough.
        """
        if not period > 0.0:
            raise ValidationError("Corrugation period must be positive")
        return cls(ProfileKind.CORRUGATION, amplitude=amplitude,
                   period=period, axis_angle=angle)

    @classmethod
    def polynomial(cls, coefficients: Dict[Tuple[int, int], float]
                   ) -> "SurfaceProfile":
        """:math:`H = d + \\sum c_{ij} x^i y^j` with total degree 2 to 4"""
        coefficients = {(int(i), int(j)): float(c)
                        for (i, j), c in coefficients.items()}
        for (i, j), c in coefficients.items():
            if i < 0 or j < 0 or not math.isfinite(c):
                raise ValidationError(f"Invalid polynomial term {(i, j)}")
            elif (i + j) < 2 and c != 0.0:
                raise ValidationError("Polynomial profile must have no "
                                      "constant or linear terms")
            elif (i + j) > 4:
                raise ValidationError("Polynomial profile is limited "
                                      "to total degree 4")
        return cls(ProfileKind.POLYNOMIAL, coefficients=coefficients)

    @classmethod
    def grid(cls, spacing: float, values,
             foot_index: Optional[Tuple[int, int]] = None) -> "SurfaceProfile":
        """Heights sampled on a square grid

        Args:
            spacing:    grid spacing
            values:     heights indexed ``[iy, ix]``
            foot_index: ``(iy, ix)`` of the foot point, the centre
                        node if ``None``
        """
        if not spacing > 0.0:
            raise ValidationError("Grid spacing must be positive")
        values = np.array(values, dtype=float)
        if values.ndim != 2:
            raise ValidationError("Height grid must be two-dimensional")
        if foot_index is None:
            foot_index = (values.shape[0] // 2, values.shape[1] // 2)
        return cls(ProfileKind.GRID, spacing=spacing, values=values,
                   foot_index=tuple(int(i) for i in foot_index))

    def height(self, x, y) -> np.ndarray:
        """Height above the foot point, :math:`H - d`, of analytic profiles"""
        x = np.asarray(x, dtype=float)
        y = np.asarray(y, dtype=float)
        if self.kind == ProfileKind.PLANE:
            return np.zeros(np.broadcast(x, y).shape)
        elif self.kind == ProfileKind.SPHERE:
            r = self.radius
            return r - np.sqrt(r ** 2 - x ** 2 - y ** 2)
        elif self.kind == ProfileKind.CYLINDER:
            r = self.radius
            u = -math.sin(self.axis_angle) * x + math.cos(self.axis_angle) * y
            return r - np.sqrt(r ** 2 - u ** 2)
        elif self.kind == ProfileKind.CORRUGATION:
            u = math.cos(self.axis_angle) * x + math.sin(self.axis_angle) * y
            return self.amplitude * (1.0 - np.cos(2.0 * math.pi * u
                                                  / self.period))
        elif self.kind == ProfileKind.POLYNOMIAL:
            return sum(c * x ** i * y ** j
                       for (i, j), c in self.coefficients.items()) + 0.0 * x * y
        else:
            raise ValidationError("Height grids have no analytic height")

    def sample(self, spacing: float, half_width: int) -> "SurfaceProfile":
        """Sample an analytic profile onto a centred grid"""
        if half_width < STENCIL_HALF_WIDTH:
            raise StencilError(f"Grid half-width must be at least "
                               f"{STENCIL_HALF_WIDTH}")
        offsets = spacing * np.arange(-half_width, half_width + 1)
        x, y = np.meshgrid(offsets, offsets)
        return SurfaceProfile.grid(spacing, self.height(x, y),
                                   (half_width, half_width))


# ----------------------------------------------------------------------------
# Finite-difference stencils on offsets -3..3
# ----------------------------------------------------------------------------
_D1_ORDER4 = np.array([0.0, 1.0, -8.0, 0.0, 8.0, -1.0, 0.0]) / 12.0
_D1_ORDER6 = np.array([-1.0, 9.0, -45.0, 0.0, 45.0, -9.0, 1.0]) / 60.0
_D1_ORDER2 = np.array([0.0, 0.0, -1.0, 0.0, 1.0, 0.0, 0.0]) / 2.0
_D2_ORDER2 = np.array([0.0, 0.0, 1.0, -2.0, 1.0, 0.0, 0.0])
_D2_ORDER4 = np.array([0.0, -1.0, 16.0, -30.0, 16.0, -1.0, 0.0]) / 12.0
_D2_ORDER6 = np.array([2.0, -27.0, 270.0, -490.0, 270.0, -27.0, 2.0]) / 180.0
_D3_ORDER2 = np.array([0.0, -1.0, 2.0, 0.0, -2.0, 1.0, 0.0]) / 2.0
_D3_ORDER4 = np.array([1.0, -8.0, 13.0, 0.0, -13.0, 8.0, -1.0]) / 8.0
_IDENTITY = np.array([0.0, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0])


def _apply(window: np.ndarray, stencil_x: np.ndarray,
           stencil_y: np.ndarray) -> float:
    # window is indexed [iy, ix]
    return float(stencil_y @ window @ stencil_x)


def _grid_derivatives(window: np.ndarray, h: float, d2: np.ndarray,
                      d1: np.ndarray, d3: np.ndarray, d2_mixed: np.ndarray,
                      d1_mixed: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    hxx = _apply(window, d2, _IDENTITY) / h ** 2
    hyy = _apply(window, _IDENTITY, d2) / h ** 2
    hxy = _apply(window, d1, d1) / h ** 2
    grad_lap_x = (_apply(window, d3, _IDENTITY)
                  + _apply(window, d1_mixed, d2_mixed)) / h ** 3
    grad_lap_y = (_apply(window, _IDENTITY, d3)
                  + _apply(window, d2_mixed, d1_mixed)) / h ** 3
    return (np.array([[hxx, hxy], [hxy, hyy]]),
            np.array([grad_lap_x, grad_lap_y]))


def _grid_geometry(profile: SurfaceProfile, d: float) -> LocalGeometry:
    values = profile.values
    iy, ix = profile.foot_index
    w = STENCIL_HALF_WIDTH
    if (iy < w or ix < w or iy + w >= values.shape[0]
            or ix + w >= values.shape[1]):
        raise StencilError(f"Foot point {profile.foot_index} needs "
                           f"{w} grid nodes on every side")

    window = values[iy - w:iy + w + 1, ix - w:ix + w + 1]
    if not np.all(np.isfinite(window)):
        raise ValidationError("Height grid contains non-finite values "
                              "around the foot point")
    h = profile.spacing

    # 4th order Hessian and 2nd order third derivatives
    hessian, grad_lap = _grid_derivatives(window, h, _D2_ORDER4, _D1_ORDER4,
                                          _D3_ORDER2, _D2_ORDER2, _D1_ORDER2)

    # Reference stencils two orders higher give the error estimates
    hessian_ref, _ = _grid_derivatives(window, h, _D2_ORDER6, _D1_ORDER6,
                                       _D3_ORDER2, _D2_ORDER2, _D1_ORDER2)
    _, grad_lap_ref = _grid_derivatives(window, h, _D2_ORDER4, _D1_ORDER4,
                                        _D3_ORDER4, _D2_ORDER4, _D1_ORDER4)

    # Surface should be flat at the foot point
    gradient = np.array([_apply(window, _D1_ORDER4, _IDENTITY),
                         _apply(window, _IDENTITY, _D1_ORDER4)]) / h
    if np.max(np.abs(gradient)) > FOOT_GRADIENT_TOL:
        warn(f"Height gradient {gradient} at the foot point is not zero; "
             f"the foot point may not be the closest surface point",
             ValidityWarning)

    hessian = 0.5 * (hessian + hessian.T)
    return LocalGeometry(d, hessian, grad_lap,
                         hessian_error=np.abs(hessian - hessian_ref),
                         grad_lap_error=np.abs(grad_lap - grad_lap_ref))


def local_geometry_from_profile(profile: SurfaceProfile,
                                d: float) -> LocalGeometry:
    """Derivatives of a surface profile at the foot point

    Analytic profiles give exact derivatives. Height grids use central
    differences of fourth order for the Hessian and second order for the
    third derivatives, with error estimates from higher-order stencils.

    Args:
        profile:    surface profile
        d:          particle-surface separation

    Returns:
        geometry in the frame the profile was specified in
    """
    if profile.kind == ProfileKind.PLANE:
        return LocalGeometry(d)
    elif profile.kind == ProfileKind.SPHERE:
        return LocalGeometry(d, np.eye(2) / profile.radius)
    elif profile.kind == ProfileKind.CYLINDER:
        normal = np.array([-math.sin(profile.axis_angle),
                           math.cos(profile.axis_angle)])
        return LocalGeometry(d, np.outer(normal, normal) / profile.radius)
    elif profile.kind == ProfileKind.CORRUGATION:
        direction = np.array([math.cos(profile.axis_angle),
                              math.sin(profile.axis_angle)])
        wave_number = 2.0 * math.pi / profile.period
        return LocalGeometry(d, (profile.amplitude * wave_number ** 2
                                 * np.outer(direction, direction)))
    elif profile.kind == ProfileKind.POLYNOMIAL:
        c = profile.coefficients
        hessian = [[2.0 * c.get((2, 0), 0.0), c.get((1, 1), 0.0)],
                   [c.get((1, 1), 0.0), 2.0 * c.get((0, 2), 0.0)]]
        grad_lap = [6.0 * c.get((3, 0), 0.0) + 2.0 * c.get((1, 2), 0.0),
                    2.0 * c.get((2, 1), 0.0) + 6.0 * c.get((0, 3), 0.0)]
        return LocalGeometry(d, hessian, grad_lap)
    elif profile.kind == ProfileKind.GRID:
        return _grid_geometry(profile, d)
    else:
        raise ValidationError(f"Unknown profile kind {profile.kind}")
