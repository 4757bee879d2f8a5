"""
Thermal coefficient curves
==========================
This example tabulates the thermal sums of every coefficient function of
the curvature expansion, normalised to their zero-temperature values, as a
function of the dimensionless temperature :math:`\\tau = d / \\lambda_T`.
At low temperature the curves approach one, the low-temperature expansion
is overlaid as dashed lines and at high temperature every curve grows
linearly in :math:`\\tau` towards the classical limit.

This example can be used as follows:

.. argparse::
   :filename: ../userproject/thermal_curves.py
   :func: get_parser
   :prog: thermal_curves
"""
import numpy as np

from argparse import ArgumentParser
from pycasimir import (ALL_INDICES, beta_T0_exact,
                       beta_tilde_low_temperature, init_logging,
                       normalized_beta_curve)
from tqdm.auto import tqdm

# ----------------------------------------------------------------------------
# Parameters
# ----------------------------------------------------------------------------
# Largest tau the low-temperature expansion is drawn up to
MAX_EXPANSION_TAU = 1.0

# ----------------------------------------------------------------------------
# CLI
# ----------------------------------------------------------------------------
def get_parser():
    parser = ArgumentParser()
    parser.add_argument("--tau-min", type=float, default=0.05, help="Smallest dimensionless temperature")
    parser.add_argument("--tau-max", type=float, default=8.0, help="Largest dimensionless temperature")
    parser.add_argument("--num-tau", type=int, default=160, help="Number of temperatures")
    parser.add_argument("--tol", type=float, default=1e-12, help="Relative truncation tolerance of the Matsubara sums")
    parser.add_argument("--save-data", action="store_true", help="Save curves to thermal_curves.csv (rather than plotting them)")
    return parser

# ----------------------------------------------------------------------------
# Entry point
# ----------------------------------------------------------------------------
if __name__ == "__main__":
    args = get_parser().parse_args()
    init_logging("INFO")

    tau = np.linspace(args.tau_min, args.tau_max, args.num_tau)

    curves = {}
    for idx in tqdm(ALL_INDICES):
        curves[idx] = np.array([ratio for _, ratio
                                in normalized_beta_curve(idx, tau, args.tol)])

    if args.save_data:
        header = "tau," + ",".join(f"beta_{i.p}_{i.q}" for i in ALL_INDICES)
        np.savetxt("thermal_curves.csv",
                   np.column_stack([tau] + [curves[i] for i in ALL_INDICES]),
                   delimiter=",", header=header)
    else:
        from matplotlib import pyplot as plt

        expansion_tau = tau[tau <= MAX_EXPANSION_TAU]
        fig, axis = plt.subplots(figsize=(10, 6))
        for idx, ratio in curves.items():
            actor = axis.plot(tau, ratio, label=f"$\\beta^{{({idx.p})}}_{idx.q}$")[0]

            expansion = [beta_tilde_low_temperature(idx, t) for t in expansion_tau]
            axis.plot(expansion_tau,
                      np.array(expansion) / float(beta_T0_exact(idx)),
                      linestyle="--", color=actor.get_color())

        axis.axhline(1.0, color="black", linewidth=0.5)
        axis.set_xlabel("$\\tau = d / \\lambda_T$")
        axis.set_ylabel("Thermal sum / zero-temperature integral")
        axis.legend(ncol=2)
        plt.show()
