"""Special functions and quadrature used throughout pycasimir

The exponential integral is evaluated with a power series below
:data:`E1_SERIES_CROSSOVER` and a modified Lentz continued fraction
above it. Both branches are vectorised over numpy arrays.
"""
import logging
import math
import numpy as np

from dataclasses import dataclass
from scipy.integrate import quad
from typing import Callable, Sequence, Union

from .errors import ConvergenceError, DomainError

logger = logging.getLogger(__name__)

# Type aliases
ArrayLike = Union[float, Sequence[float], np.ndarray]


@dataclass(frozen=True)
class MathConstants:
    """Fixed mathematical constants (20 significant digits)"""
    zeta3: float = 1.2020569031595942854
    zeta5: float = 1.0369277551433699263
    zeta7: float = 1.0083492773819228268
    euler_gamma: float = 0.57721566490153286061


MATH_CONSTANTS = MathConstants()

# Largest argument evaluated with the power series
E1_SERIES_CROSSOVER = 1.5

# Number of power series terms, 1.5^40/40! is far below double precision
_E1_SERIES_TERMS = 40

# Continued fraction controls (Numerical Recipes expint with n = 1)
_E1_CF_MAX_ITERATIONS = 1000
_E1_CF_EPS = np.finfo(float).eps
_E1_CF_FPMIN = np.finfo(float).tiny / _E1_CF_EPS

# Converged elements wobble by a few ulp around delta = 1
_E1_CF_TOL = 4.0 * _E1_CF_EPS


def _check_positive(x: np.ndarray):
    if not np.all(x > 0.0):
        raise DomainError("Exponential integral requires x > 0")


def _e1_series(x: np.ndarray) -> np.ndarray:
    # E1(x) = -gamma - ln(x) - sum_k (-x)^k / (k k!)
    total = np.zeros_like(x)
    term = np.ones_like(x)
    for k in range(1, _E1_SERIES_TERMS + 1):
        term *= -x / k
        total += term / k
    return -MATH_CONSTANTS.euler_gamma - np.log(x) - total


def _e1_continued_fraction_scaled(x: np.ndarray) -> np.ndarray:
    # Modified Lentz evaluation of exp(x) E1(x)
    b = x + 1.0
    c = np.full_like(x, 1.0 / _E1_CF_FPMIN)
    d = 1.0 / b
    h = d.copy()
    result = np.empty_like(x)

    # Elements are frozen at the iteration they converge
    active = np.arange(len(x))
    for i in range(1, _E1_CF_MAX_ITERATIONS + 1):
        a = -float(i * i)
        b += 2.0
        d = 1.0 / (a * d + b)
        c = b + a / c
        delta = c * d
        h *= delta

        done = (np.abs(delta - 1.0) <= _E1_CF_TOL)
        if np.any(done):
            result[active[done]] = h[done]
            keep = ~done
            active = active[keep]
            b, c, d, h = b[keep], c[keep], d[keep], h[keep]
            if len(active) == 0:
                return result

    raise ConvergenceError("Continued fraction for E1 failed to converge",
                           terms_used=_E1_CF_MAX_ITERATIONS)


def _as_output(value: np.ndarray, scalar: bool):
    return float(value) if scalar else value


def exp_integral_E1(x: ArrayLike) -> Union[float, np.ndarray]:
    """Exponential integral :math:`E_1(x) = \\int_x^\\infty e^{-t}/t\\,dt`

    Args:
        x:  positive argument(s)

    Returns:
        :math:`E_1(x)` as a float for scalar input, otherwise an array
    """
    x_arr = np.asarray(x, dtype=float)
    scalar = (x_arr.ndim == 0)
    x_arr = np.atleast_1d(x_arr)
    _check_positive(x_arr)

    result = np.empty_like(x_arr)
    series = (x_arr <= E1_SERIES_CROSSOVER)
    if np.any(series):
        result[series] = _e1_series(x_arr[series])
    if not np.all(series):
        x_cf = x_arr[~series]
        result[~series] = _e1_continued_fraction_scaled(x_cf) * np.exp(-x_cf)
    return _as_output(result if not scalar else result[0], scalar)


def exp_integral_E1_scaled(x: ArrayLike) -> Union[float, np.ndarray]:
    """:math:`e^x E_1(x)`, free of underflow at large ``x``"""
    x_arr = np.asarray(x, dtype=float)
    scalar = (x_arr.ndim == 0)
    x_arr = np.atleast_1d(x_arr)
    _check_positive(x_arr)

    result = np.empty_like(x_arr)
    series = (x_arr <= E1_SERIES_CROSSOVER)
    if np.any(series):
        x_s = x_arr[series]
        result[series] = _e1_series(x_s) * np.exp(x_s)
    if not np.all(series):
        result[~series] = _e1_continued_fraction_scaled(x_arr[~series])
    return _as_output(result if not scalar else result[0], scalar)


def table_Ei(x: ArrayLike) -> Union[float, np.ndarray]:
    """Exponential integral in the sign convention of the coefficient table

    :math:`\\mathrm{Ei}(x) = -\\int_x^\\infty e^{-t}/t\\,dt = -E_1(x)`,
    which is negative for every positive ``x``.
    """
    return -exp_integral_E1(x)


def envelope_tail(envelope: Sequence[float], decay_rate: float,
                  x: float) -> float:
    """Integral of :math:`\\sum_k c_k \\xi^k e^{-a \\xi}` from ``x`` to infinity

    Args:
        envelope:   non-negative polynomial coefficients :math:`c_k`,
                    lowest power first
        decay_rate: exponential decay rate :math:`a`
        x:          lower limit
    """
    y = decay_rate * x
    total = 0.0
    for k, c_k in enumerate(envelope):
        # Upper incomplete gamma function for integer order
        partial = math.fsum(y ** j / math.factorial(j) for j in range(k + 1))
        total += (c_k * math.factorial(k) * math.exp(-y) * partial
                  / decay_rate ** (k + 1))
    return total


def quad_halfline(f: Callable[[float], float], rel_tol: float,
                  envelope: Sequence[float] = (1.0,), decay_rate: float = 2.0,
                  panel_width: float = 8.0, max_panels: int = 32,
                  limit: int = 200) -> float:
    """Integrate ``f`` over :math:`[0, \\infty)`

    The half-line is covered by panels of ``panel_width`` each integrated
    adaptively with :func:`scipy.integrate.quad`. Integration stops once
    the analytic tail of the caller's envelope plus the accumulated
    quadrature error falls below ``rel_tol`` relative to the partial sum.

    Args:
        f:              integrand, bounded in magnitude by
                        ``envelope(xi) * exp(-decay_rate * xi)``
        rel_tol:        relative tolerance in (1e-14, 1e-3)
        envelope:       polynomial coefficients of the decay envelope,
                        lowest power first
        decay_rate:     exponential decay rate of the envelope
        panel_width:    width of each quadrature panel
        max_panels:     panel budget before giving up
        limit:          subdivision limit passed to :func:`scipy.integrate.quad`

    Returns:
        the integral

    Raises:
        ConvergenceError: if the tolerance is not met within ``max_panels``
                          or a panel fails to converge
    """
    if not (1e-14 < rel_tol < 1e-3):
        raise DomainError("rel_tol must lie in (1e-14, 1e-3)")
    if not decay_rate > 0.0:
        raise DomainError("decay_rate must be positive")
    if any(c_k < 0.0 for c_k in envelope):
        raise DomainError("Envelope coefficients must be non-negative")

    # **NOTE** QUADPACK refuses relative tolerances below 50 eps
    panel_rel_tol = max(0.1 * rel_tol, 1.2e-14)

    values = []
    error = 0.0
    lower = 0.0
    for panel in range(max_panels):
        upper = lower + panel_width
        partial = abs(math.fsum(values))
        result = quad(f, lower, upper, epsabs=0.1 * rel_tol * partial,
                      epsrel=panel_rel_tol, limit=limit, full_output=1)
        if len(result) > 3:
            raise ConvergenceError(
                f"Quadrature on [{lower}, {upper}] failed: {result[3]}",
                estimate=math.fsum(values + [result[0]]),
                error_bound=error + result[1] + envelope_tail(envelope,
                                                              decay_rate,
                                                              upper),
                terms_used=panel + 1)

        values.append(result[0])
        error += result[1]
        total = math.fsum(values)

        tail = envelope_tail(envelope, decay_rate, upper)
        if (tail + error) <= rel_tol * abs(total):
            logger.debug("Half-line quadrature converged after %d panels "
                         "(cut-off %g, tail %g)", panel + 1, upper, tail)
            return total

        lower = upper

    total = math.fsum(values)
    raise ConvergenceError(
        f"Half-line quadrature did not converge within {max_panels} panels",
        estimate=total,
        error_bound=error + envelope_tail(envelope, decay_rate, lower),
        terms_used=max_panels)
