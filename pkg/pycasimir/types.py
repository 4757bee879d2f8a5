"""Domain types shared between the pycasimir modules"""
import math
import numpy as np

from dataclasses import dataclass, field
from enum import Enum, IntEnum
from typing import Dict, List, Optional, Sequence

from .errors import BetaIndexError, DomainError, ValidationError

# Valid (p, q) rows of the perfect-conductor coefficient table
# **NOTE** the single p = 3 coefficient is stored with q = 1
VALID_INDICES = ((0, 1), (0, 2), (2, 1), (2, 2), (2, 3), (3, 1),
                 (4, 1), (4, 2), (4, 3), (4, 4), (4, 5))


@dataclass(frozen=True, order=True)
class BetaIndex:
    """Identifies one coefficient function :math:`\\beta^{(p)}_q`

    Args:
        p:  number of height-profile derivatives (0, 2, 3 or 4)
        q:  term index within order ``p``
    """
    p: int
    q: int = 1

    def __post_init__(self):
        if (self.p, self.q) not in VALID_INDICES:
            raise BetaIndexError(f"({self.p}, {self.q}) is not a row "
                                 f"of the coefficient table")

    def __str__(self):
        return f"({self.p},{self.q})"


ALL_INDICES = tuple(BetaIndex(p, q) for p, q in VALID_INDICES)


class Frame(Enum):
    """Coordinate frame geometry and polarizability are expressed in"""
    GENERAL = "general"
    PRINCIPAL = "principal"


class EnergyUnit(Enum):
    """Units of the dimensionless energies in a :class:`PotentialBreakdown`

    Energies are always per unit polarizability volume so a breakdown
    holds :math:`U / \\epsilon` with :math:`\\epsilon` the scale below.
    """
    #: :math:`\\hbar c / (\\pi d^4)`
    QUANTUM = "hbar_c/(pi d^4)"

    #: :math:`k_B T / d^3`
    THERMAL = "k_B T/d^3"


class ExpansionOrder(IntEnum):
    """Order of a term in the derivative expansion"""
    FLAT = 0
    CURVATURE1 = 1
    GRADIENT = 2
    CURVATURE2 = 3


class Channel(IntEnum):
    """Polarizability channel a term couples to

    ``XX_YY`` is the traceless in-plane part of the polarizability,
    :math:`\\alpha_{xx} - \\alpha_{yy}` in the principal frame.
    """
    PERP = 0
    ZZ = 1
    ZI = 2
    XX_YY = 3


class PolarizabilityTensor:
    """Static dipole polarizability :math:`\\alpha^0_{\\mu\\nu}`

    Args:
        components: symmetric 3x3 matrix in volume units
        frame:      frame the components are expressed in, ``None``
                    if it should match any geometry
    """
    # Relative asymmetry tolerated in components
    SYMMETRY_TOL = 1e-12

    def __init__(self, components, frame: Optional[Frame] = None):
        alpha = np.array(components, dtype=float)
        if alpha.shape != (3, 3):
            raise ValidationError("Polarizability must be a 3x3 matrix")
        if not np.all(np.isfinite(alpha)):
            raise ValidationError("Polarizability must be finite")

        scale = np.max(np.abs(alpha))
        if np.max(np.abs(alpha - alpha.T)) > self.SYMMETRY_TOL * scale:
            raise ValidationError("Polarizability must be symmetric")

        # Store exactly symmetric copy
        self._components = 0.5 * (alpha + alpha.T)
        self._components.flags.writeable = False
        self.frame = frame

    @classmethod
    def isotropic(cls, alpha: float, frame: Optional[Frame] = None):
        return cls(alpha * np.eye(3), frame)

    @classmethod
    def diagonal(cls, xx: float, yy: float, zz: float,
                 frame: Optional[Frame] = None):
        return cls(np.diag([xx, yy, zz]), frame)

    @property
    def components(self) -> np.ndarray:
        return self._components

    @property
    def perp(self) -> float:
        """:math:`\\alpha_\\perp = \\alpha_{xx} + \\alpha_{yy}`"""
        return self._components[0, 0] + self._components[1, 1]

    @property
    def zz(self) -> float:
        return self._components[2, 2]

    @property
    def anisotropy(self) -> float:
        """:math:`\\alpha_{xx} - \\alpha_{yy}`"""
        return self._components[0, 0] - self._components[1, 1]

    @property
    def zi(self) -> np.ndarray:
        """Mixed components :math:`(\\alpha_{zx}, \\alpha_{zy})`"""
        return self._components[2, :2].copy()

    @property
    def in_plane(self) -> np.ndarray:
        """In-plane 2x2 block :math:`\\alpha_{ij}`"""
        return self._components[:2, :2].copy()

    def rotated(self, rotation: np.ndarray,
                frame: Optional[Frame] = None) -> "PolarizabilityTensor":
        """Components after rotating the particle by ``rotation``

        Args:
            rotation:   3x3 rotation matrix, columns are the rotated axes
            frame:      frame tag of the result
        """
        rotation = np.asarray(rotation, dtype=float)
        return PolarizabilityTensor(rotation @ self._components @ rotation.T,
                                    frame)

    def with_frame(self, frame: Optional[Frame]) -> "PolarizabilityTensor":
        return PolarizabilityTensor(self._components, frame)

    def __add__(self, other: "PolarizabilityTensor") -> "PolarizabilityTensor":
        if (self.frame is not None and other.frame is not None
                and self.frame != other.frame):
            raise ValidationError("Cannot add polarizabilities "
                                  "expressed in different frames")
        return PolarizabilityTensor(self._components + other._components,
                                    self.frame or other.frame)

    def __mul__(self, scale: float) -> "PolarizabilityTensor":
        return PolarizabilityTensor(self._components * scale, self.frame)

    __rmul__ = __mul__

    def __repr__(self):
        return (f"PolarizabilityTensor({self._components.tolist()}, "
                f"frame={self.frame})")


@dataclass
class PotentialBreakdown:
    """Potential split by expansion order and polarizability channel

    ``contributions[order, channel]`` holds the dimensionless energy
    (in ``unit`` per polarizability volume) of each piece.
    """
    contributions: np.ndarray
    unit: EnergyUnit
    tau: float
    tau_in_range: bool = True
    curvature_in_range: bool = True
    warnings: List[str] = field(default_factory=list)

    def __post_init__(self):
        self.contributions = np.array(self.contributions, dtype=float)
        if self.contributions.shape != (len(ExpansionOrder), len(Channel)):
            raise ValidationError("Contributions must be indexed "
                                  "by expansion order and channel")

    def order_term(self, order: ExpansionOrder) -> float:
        return math.fsum(self.contributions[order])

    def channel_term(self, channel: Channel) -> float:
        return math.fsum(self.contributions[:, channel])

    @property
    def flat_term(self) -> float:
        return self.order_term(ExpansionOrder.FLAT)

    @property
    def curvature1_term(self) -> float:
        return self.order_term(ExpansionOrder.CURVATURE1)

    @property
    def gradient_term(self) -> float:
        return self.order_term(ExpansionOrder.GRADIENT)

    @property
    def curvature2_term(self) -> float:
        return self.order_term(ExpansionOrder.CURVATURE2)

    @property
    def order_terms(self) -> Dict[str, float]:
        return {o.name.lower(): self.order_term(o) for o in ExpansionOrder}

    @property
    def channels(self) -> Dict[str, float]:
        return {c.name.lower(): self.channel_term(c) for c in Channel}

    @property
    def total(self) -> float:
        return math.fsum(self.order_term(o) for o in ExpansionOrder)

    def to_unit(self, unit: EnergyUnit,
                tau: Optional[float] = None) -> "PotentialBreakdown":
        """Re-express the breakdown in another energy unit

        :math:`k_B T / d^3 = (\\tau / 2)\\,\\hbar c / (\\pi d^4)` so the
        conversion needs a non-zero :math:`\\tau`.

        Args:
            unit:   target unit
            tau:    dimensionless temperature, defaults to ``self.tau``
        """
        if unit == self.unit:
            return self._copy(self.contributions.copy(), unit)

        tau = self.tau if tau is None else tau
        if not tau > 0.0:
            raise DomainError("Converting between quantum and thermal "
                              "units requires tau > 0")
        factor = (0.5 * tau if self.unit == EnergyUnit.THERMAL
                  else 2.0 / tau)
        return self._copy(self.contributions * factor, unit)

    def as_dict(self) -> Dict:
        return {"unit": self.unit.value,
                "tau": self.tau,
                "total": self.total,
                "terms": self.order_terms,
                "channels": self.channels,
                "validity": {"tau_in_range": self.tau_in_range,
                             "curvature_in_range": self.curvature_in_range},
                "warnings": list(self.warnings)}

    def _copy(self, contributions: np.ndarray, unit: EnergyUnit):
        return PotentialBreakdown(contributions, unit, self.tau,
                                  self.tau_in_range, self.curvature_in_range,
                                  list(self.warnings))


def channel_matrix(values: Dict[Sequence[int], float]) -> np.ndarray:
    """Build a contributions matrix from ``{(order, channel): value}``"""
    matrix = np.zeros((len(ExpansionOrder), len(Channel)))
    for (order, channel), value in values.items():
        matrix[order, channel] += value
    return matrix
