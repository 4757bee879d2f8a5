"""Helpers which coerce loosely-typed user input into pycasimir types"""
import numpy as np

from numbers import Number
from typing import Optional, Sequence, Tuple, Union

from .errors import BetaIndexError, ValidationError
from .types import BetaIndex, Frame, PolarizabilityTensor

# Type aliases
BetaIndexType = Union[BetaIndex, Tuple[int, int], str]
PolarizabilityType = Union[PolarizabilityTensor, Number, Sequence[float],
                           Sequence[Sequence[float]], np.ndarray]


def _get_beta_index(idx: BetaIndexType) -> BetaIndex:
    """Resolve a coefficient index given as an object, pair or string

    Strings may be written ``"4,2"``, ``"4_2"`` or ``"(4,2)"``;
    ``"3"`` and ``(3,)`` name the single p = 3 coefficient.
    """
    if isinstance(idx, BetaIndex):
        return idx
    elif isinstance(idx, str):
        fields = idx.strip().strip("()").replace("_", ",").split(",")
        try:
            return BetaIndex(*(int(f) for f in fields if f.strip()))
        except (TypeError, ValueError):
            raise BetaIndexError(f"Invalid coefficient index '{idx}'")
    elif isinstance(idx, (tuple, list)) and 1 <= len(idx) <= 2:
        return BetaIndex(*(int(i) for i in idx))
    else:
        raise BetaIndexError(f"Invalid coefficient index {idx!r}")


def _get_polarizability(alpha: PolarizabilityType,
                        frame: Optional[Frame] = None) -> PolarizabilityTensor:
    """Resolve a polarizability from a tensor, scalar or component list

    A scalar gives an isotropic tensor, three values the diagonal
    (xx, yy, zz), six values (xx, yy, zz, xy, xz, yz) and nine values
    or a 3x3 array the full matrix.
    """
    if isinstance(alpha, PolarizabilityTensor):
        return alpha if frame is None else alpha.with_frame(frame)
    elif isinstance(alpha, Number):
        return PolarizabilityTensor.isotropic(float(alpha), frame)

    values = np.asarray(alpha, dtype=float)
    if values.shape == (3, 3):
        return PolarizabilityTensor(values, frame)

    values = values.ravel()
    if len(values) == 1:
        return PolarizabilityTensor.isotropic(float(values[0]), frame)
    elif len(values) == 3:
        return PolarizabilityTensor.diagonal(*values, frame=frame)
    elif len(values) == 6:
        xx, yy, zz, xy, xz, yz = values
        return PolarizabilityTensor([[xx, xy, xz], [xy, yy, yz],
                                     [xz, yz, zz]], frame)
    elif len(values) == 9:
        return PolarizabilityTensor(values.reshape(3, 3), frame)
    else:
        raise ValidationError("Polarizability must be given as 1, 3, 6 "
                              "or 9 values")


def _check_frames(alpha: PolarizabilityTensor, frame: Frame):
    if alpha.frame is not None and alpha.frame != frame:
        raise ValidationError(f"Polarizability is expressed in the "
                              f"{alpha.frame.value} frame but geometry is "
                              f"in the {frame.value} frame")
