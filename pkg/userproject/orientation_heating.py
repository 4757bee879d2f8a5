"""
Orientation of an elongated particle above a heated cylinder
============================================================
This example computes how strongly an elongated (uniaxial) particle is
aligned with the axis of a nearby conducting cylinder as the temperature
rises. The alignment energy is the difference between the potential with
the long axis across and along the cylinder. It is evaluated from the
full Matsubara sums and compared with the low-temperature and classical
closed forms, converted to Kelvin so it can be compared with :math:`k_B T`.

This example can be used as follows:

.. argparse::
   :filename: ../userproject/orientation_heating.py
   :func: get_parser
   :prog: orientation_heating
"""
import math
import numpy as np

from argparse import ArgumentParser
from pycasimir import (EnergyUnit, LocalGeometry, PolarizabilityTensor,
                       ThermalConfig, ValidityWarning, init_logging,
                       orientation_scan, u_classical, u_retarded)
from pycasimir.constants import (K_B, NM, NM3, quantum_energy_scale,
                                 tau_from_temperature)
from scipy.spatial.transform import Rotation
from tqdm.auto import tqdm
from warnings import simplefilter

# ----------------------------------------------------------------------------
# Parameters
# ----------------------------------------------------------------------------
# Polarizability of the particle along and across its long axis (nm^3)
ALPHA_LONG_NM3 = 2.0e3
ALPHA_SHORT_NM3 = 1.0e3

# Orientations, long axis across (phi = 0) and along (phi = pi / 2) y
ORIENTATIONS = [0.0, 0.5 * math.pi]

# ----------------------------------------------------------------------------
# Helper functions
# ----------------------------------------------------------------------------
def to_kelvin(quantum_energy, d):
    # Energy in units of hbar c / (pi d^4) per nm^3 of polarizability
    return quantum_energy * NM3 * quantum_energy_scale(d) / K_B

def closed_form_alignment(alpha, geom, tau):
    # Across minus along from the closed-form limits, the classical one
    # has no zero-temperature counterpart
    across = alpha
    along = alpha.rotated(Rotation.from_euler("z", 0.5 * math.pi).as_matrix())
    retarded = (u_retarded(across, geom, tau).total
                - u_retarded(along, geom, tau).total)
    if tau > 0.0:
        classical = (u_classical(across, geom, tau).to_unit(EnergyUnit.QUANTUM).total
                     - u_classical(along, geom, tau).to_unit(EnergyUnit.QUANTUM).total)
    else:
        classical = math.nan
    return retarded, classical

# ----------------------------------------------------------------------------
# CLI
# ----------------------------------------------------------------------------
def get_parser():
    parser = ArgumentParser()
    parser.add_argument("--d-nm", type=float, default=500.0, help="Particle-surface separation (nm)")
    parser.add_argument("--radius-nm", type=float, default=5000.0, help="Cylinder radius (nm)")
    parser.add_argument("--t-max", type=float, default=1500.0, help="Highest temperature (K)")
    parser.add_argument("--num-temperatures", type=int, default=31, help="Number of temperatures")
    parser.add_argument("--save-data", action="store_true", help="Save energies to orientation_heating.csv (rather than plotting them)")
    return parser

# ----------------------------------------------------------------------------
# Entry point
# ----------------------------------------------------------------------------
if __name__ == "__main__":
    args = get_parser().parse_args()
    init_logging("INFO")

    # Low-temperature curve is drawn beyond its validity range on purpose
    simplefilter("ignore", ValidityWarning)

    d = args.d_nm * NM
    alpha = PolarizabilityTensor.diagonal(ALPHA_LONG_NM3, ALPHA_SHORT_NM3,
                                          ALPHA_SHORT_NM3)

    # Cylinder axis along y so curvature is along x
    geom = LocalGeometry.principal(args.d_nm, R1=args.radius_nm)

    temperatures = np.linspace(0.0, args.t_max, args.num_temperatures)
    full = []
    retarded = []
    classical = []
    for temperature in tqdm(temperatures):
        tau = tau_from_temperature(d, temperature)
        scan = orientation_scan(alpha, geom, ThermalConfig(tau=tau),
                                ORIENTATIONS)
        full.append(to_kelvin(scan.samples[0].energy - scan.samples[1].energy, d))

        r, c = closed_form_alignment(alpha, geom, tau)
        retarded.append(to_kelvin(r, d))
        classical.append(to_kelvin(c, d))

    if args.save_data:
        np.savetxt("orientation_heating.csv",
                   np.column_stack((temperatures, full, retarded, classical)),
                   delimiter=",",
                   header="Temperature [K], Full [K], Low temperature [K], Classical [K]")
    else:
        import matplotlib.pyplot as plt

        fig, axis = plt.subplots(figsize=(10, 5))
        axis.plot(temperatures, full, label="Matsubara sums")
        axis.plot(temperatures, retarded, linestyle="--", label="Low temperature")
        axis.plot(temperatures, classical, linestyle=":", label="Classical")
        axis.plot(temperatures, temperatures, color="black", linewidth=0.5,
                  label="$k_B T$")
        axis.set_xlabel("Temperature [K]")
        axis.set_ylabel("Alignment energy [K]")
        axis.set_yscale("log")
        axis.legend()
        plt.show()
