"""Physical constants and conversions between dimensionless and SI energies

Constants come from :mod:`scipy.constants`. The four used here (reduced
Planck constant, speed of light, Boltzmann constant and elementary charge)
are exact in the 2019 SI so they agree with CODATA 2018 to every digit.
"""
import math

from scipy.constants import c, e, hbar, k, nano

from .errors import DomainError

# Reduced Planck constant times speed of light [J m]
HBAR_C = hbar * c

# Same in the units customary for the thermal wavelength [eV nm]
HBAR_C_EV_NM = HBAR_C / (e * nano)

# Boltzmann constant [J/K] and [eV/K]
K_B = k
K_B_EV = k / e

# Nanometre and cubic nanometre in SI
NM = nano
NM3 = nano ** 3


def thermal_wavelength(temperature: float) -> float:
    """Thermal wavelength :math:`\\lambda_T = \\hbar c / (2 \\pi k_B T)`

    Args:
        temperature:    temperature [K], zero gives an infinite wavelength

    Returns:
        wavelength [m]
    """
    if not temperature >= 0.0:
        raise DomainError("Temperature must be non-negative")
    elif temperature == 0.0:
        return math.inf
    else:
        return HBAR_C / (2.0 * math.pi * K_B * temperature)


def tau_from_temperature(d: float, temperature: float) -> float:
    """Dimensionless temperature :math:`\\tau = d / \\lambda_T`

    Args:
        d:              particle-surface separation [m]
        temperature:    temperature [K]
    """
    if not d > 0.0:
        raise DomainError("Separation must be positive")
    return d / thermal_wavelength(temperature)


def temperature_from_tau(d: float, tau: float) -> float:
    """Inverse of :func:`tau_from_temperature` [K]"""
    if not d > 0.0:
        raise DomainError("Separation must be positive")
    if not tau >= 0.0:
        raise DomainError("tau must be non-negative")
    return tau * HBAR_C / (2.0 * math.pi * K_B * d)


def quantum_energy_scale(d: float) -> float:
    """Energy per polarizability volume :math:`\\hbar c / (\\pi d^4)` [J/m^3]"""
    if not d > 0.0:
        raise DomainError("Separation must be positive")
    return HBAR_C / (math.pi * d ** 4)


def thermal_energy_scale(d: float, temperature: float) -> float:
    """Energy per polarizability volume :math:`k_B T / d^3` [J/m^3]"""
    if not d > 0.0:
        raise DomainError("Separation must be positive")
    if not temperature >= 0.0:
        raise DomainError("Temperature must be non-negative")
    return K_B * temperature / d ** 3
