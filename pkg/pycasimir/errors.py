"""Exception and warning hierarchy shared by all pycasimir modules"""
from typing import Optional


class CasimirError(Exception):
    """Base class of every error raised by pycasimir"""


class DomainError(CasimirError, ValueError):
    """Argument outside the mathematical domain of an operation"""


class BetaIndexError(CasimirError, KeyError):
    """(p, q) pair which is not a row of the coefficient table"""


class ValidationError(CasimirError, ValueError):
    """Malformed physical input e.g. non-symmetric polarizability"""


class StencilError(ValidationError):
    """Height grid too small for the finite-difference stencils"""


class ConfigError(CasimirError):
    """Invalid run configuration

    Args:
        message:    description of the problem
        field:      name of the offending configuration field
    """
    def __init__(self, message: str, field: Optional[str] = None):
        super(ConfigError, self).__init__(
            message if field is None else f"{field}: {message}")
        self.field = field


class ConvergenceError(CasimirError):
    """Iterative evaluation stopped before reaching its tolerance

    Args:
        message:        description of the failure
        estimate:       best estimate available when evaluation stopped
        error_bound:    bound on the error of ``estimate``
        terms_used:     number of terms or panels consumed
    """
    def __init__(self, message: str, estimate: float = float("nan"),
                 error_bound: float = float("inf"), terms_used: int = 0):
        super(ConvergenceError, self).__init__(message)
        self.estimate = estimate
        self.error_bound = error_bound
        self.terms_used = terms_used


class ValidityWarning(UserWarning):
    """Input lies outside the heuristic validity domain of an expansion"""
