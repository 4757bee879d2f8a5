"""
Command-line front end
======================
Tabulates the coefficient functions and their thermal sums, evaluates the
potential of a particle above a curved surface and scans the orientation
of anisotropic particles. Output is CSV or JSON on stdout or in a file.

.. argparse::
   :module: pycasimir.cli
   :func: get_parser
   :prog: pycasimir
"""
import json
import logging
import math
import re
import sys
import numpy as np

from argparse import ArgumentParser, Namespace
from concurrent.futures import ThreadPoolExecutor
from configparser import ConfigParser, Error as ConfigParserError
from dataclasses import dataclass
from enum import Enum
from datetime import datetime, timezone
from psutil import cpu_count
from typing import Any, Callable, Dict, Iterable, List, Optional, Sequence
from warnings import catch_warnings, simplefilter

from . import constants
from ._logging import init_logging
from .beta_table import beta_eval
from .errors import (BetaIndexError, CasimirError, ConfigError,
                     ConvergenceError, DomainError, ValidationError)
from .eta_retarded import u_classical, u_retarded
from .geometry import (LocalGeometry, SurfaceProfile, local_geometry_from_profile,
                       to_principal_frame)
from .model_preprocessor import _get_beta_index, _get_polarizability
from .potential import orientation_scan, u_full
from .thermal import ThermalConfig, beta_T0_integral, matsubara_beta_sum
from .types import ALL_INDICES, BetaIndex, EnergyUnit, Frame

logger = logging.getLogger(__name__)

# Exit codes
EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_CONVERGENCE = 3
EXIT_IO = 4

# CSV headers of the tabulating commands
BETA_TABLE_COLUMNS = ("p", "q", "xi", "beta")
MATSUBARA_CURVE_COLUMNS = ("p", "q", "tau", "beta_tilde", "beta_tilde_over_T0")
ORIENTATION_COLUMNS = ("tau", "theta", "phi", "energy", "is_min")

_SPACING_HEADER = re.compile(r"#\s*spacing_nm\s*=\s*(\S+)")


# ----------------------------------------------------------------------------
# Argument types
# ----------------------------------------------------------------------------
def parse_floats(text: str) -> List[float]:
    """Comma or whitespace separated numbers, ``inf`` allowed"""
    fields = [f for f in re.split(r"[,\s]+", text.strip()) if f]
    try:
        return [float(f) for f in fields]
    except ValueError:
        raise ConfigError(f"'{text}' is not a list of numbers")


def parse_grid(text: str) -> List[float]:
    """Grid given as ``start:stop:count`` or as an explicit list"""
    if ":" in text:
        fields = text.split(":")
        if len(fields) != 3:
            raise ConfigError(f"Grid '{text}' must be start:stop:count")
        start, stop = float(fields[0]), float(fields[1])
        count = int(fields[2])
        if count < 0:
            raise ConfigError(f"Grid '{text}' has a negative count")
        return np.linspace(start, stop, count).tolist()
    else:
        return parse_floats(text)


def parse_indices(text: str) -> List[BetaIndex]:
    """``all`` or indices such as ``0,1;4,2`` or ``4_2 3``"""
    if text.strip().lower() == "all":
        return list(ALL_INDICES)
    fields = [f for f in re.split(r"[;\s]+", text.strip()) if f]
    return [_get_beta_index(f) for f in fields]


# ----------------------------------------------------------------------------
# Configuration
# ----------------------------------------------------------------------------
@dataclass(frozen=True)
class RunConfig:
    """Physical parameters of one potential evaluation

    Args:
        d_nm:           particle-surface separation [nm]
        temperature:    temperature [K], exclusive with ``tau``
        tau:            dimensionless temperature, exclusive with
                        ``temperature``
    """
    d_nm: float
    temperature: Optional[float] = None
    tau: Optional[float] = None

    def __post_init__(self):
        if not (math.isfinite(self.d_nm) and self.d_nm > 0.0):
            raise ConfigError("Separation must be positive", "d_nm")
        if (self.temperature is None) == (self.tau is None):
            raise ConfigError("Give exactly one of temperature and tau",
                              "temperature")
        if self.temperature is not None and not self.temperature >= 0.0:
            raise ConfigError("Temperature must be non-negative",
                              "temperature")
        if self.tau is not None and not self.tau >= 0.0:
            raise ConfigError("tau must be non-negative", "tau")

    @property
    def d(self) -> float:
        """Separation [m]"""
        return self.d_nm * constants.NM

    @property
    def resolved_tau(self) -> float:
        if self.tau is not None:
            return self.tau
        else:
            return constants.tau_from_temperature(self.d, self.temperature)


def _config_values(path: str) -> Dict[str, str]:
    # Flat key = value file, read under an implicit section
    with open(path) as config_file:
        text = config_file.read()
    parser = ConfigParser(interpolation=None)
    try:
        parser.read_string("[run]\n" + text, source=path)
    except ConfigParserError as ex:
        raise ConfigError(f"Cannot parse configuration '{path}': {ex}")
    return {key.replace("-", "_"): value
            for key, value in parser["run"].items()}


def _apply_config(command_parser: ArgumentParser, path: str):
    actions = {a.dest: a for a in command_parser._actions}
    defaults = {}
    for key, value in _config_values(path).items():
        action = actions.get(key)
        if action is None or key in ("config", "help"):
            raise ConfigError(f"Unknown configuration key '{key}' in "
                              f"'{path}'", key)
        if action.nargs == 0:
            # store_true flags
            defaults[key] = value.strip().lower() in ("1", "true", "yes", "on")
        else:
            # String defaults are converted by argparse with the action type
            defaults[key] = value.strip()
    command_parser.set_defaults(**defaults)


def _thermal_config(args: Namespace, tau: float = 0.0) -> ThermalConfig:
    try:
        return ThermalConfig(tau=tau, sum_rel_tol=args.tol,
                             quad_rel_tol=args.quad_tol)
    except ValidationError as ex:
        raise ConfigError(str(ex), "tol")


def _run_configs(args: Namespace) -> List[RunConfig]:
    temperatures = args.temperature or []
    taus = args.tau or []
    if temperatures and taus:
        raise ConfigError("Give exactly one of --temperature and --tau",
                          "temperature")
    if temperatures:
        return [RunConfig(args.d_nm, temperature=t) for t in temperatures]
    elif taus:
        return [RunConfig(args.d_nm, tau=t) for t in taus]
    else:
        raise ConfigError("One of --temperature and --tau is required",
                          "temperature")


def read_height_grid(path: str) -> SurfaceProfile:
    """Height grid file whose first line is ``# spacing_nm=<value>``"""
    with open(path) as grid_file:
        header = grid_file.readline()
    match = _SPACING_HEADER.match(header.strip())
    if match is None:
        raise ConfigError(f"'{path}' must start with '# spacing_nm=<value>'",
                          "height_grid")
    try:
        spacing = float(match.group(1))
    except ValueError:
        raise ConfigError(f"Invalid spacing in '{path}'", "height_grid")

    values = np.loadtxt(path, comments="#", ndmin=2)
    return SurfaceProfile.grid(spacing, values)


def _surface_geometry(args: Namespace, d_nm: float) -> LocalGeometry:
    profile = args.profile
    if profile == "principal":
        grad_lap = args.grad_lap if args.grad_lap else [0.0, 0.0]
        if len(grad_lap) != 2:
            raise ConfigError("--grad-lap needs two values", "grad_lap")
        return LocalGeometry.principal(d_nm, args.r1_nm, args.r2_nm,
                                       grad_lap)
    elif profile == "plane":
        surface = SurfaceProfile.plane()
    elif profile == "sphere":
        surface = SurfaceProfile.sphere(args.radius_nm)
    elif profile == "cylinder":
        surface = SurfaceProfile.cylinder(args.radius_nm, args.axis_angle)
    elif profile == "corrugation":
        surface = SurfaceProfile.corrugation(args.amplitude_nm,
                                             args.period_nm, args.axis_angle)
    elif profile == "grid":
        if args.height_grid is None:
            raise ConfigError("--height-grid is required for grid "
                              "profiles", "height_grid")
        surface = read_height_grid(args.height_grid)
    else:
        raise ConfigError(f"Unknown profile '{profile}'", "profile")
    return local_geometry_from_profile(surface, d_nm)


# ----------------------------------------------------------------------------
# Output
# ----------------------------------------------------------------------------
def _format_value(value: Any) -> str:
    if isinstance(value, bool):
        return "1" if value else "0"
    elif isinstance(value, float):
        return format(value, ".17g")
    else:
        return str(value)


def format_csv(columns: Sequence[str], rows: Iterable[Dict]) -> str:
    lines = [",".join(columns)]
    lines.extend(",".join(_format_value(row[c]) for c in columns)
                 for row in rows)
    return "\n".join(lines) + "\n"


def _json_default(value: Any) -> Any:
    if isinstance(value, BetaIndex):
        return str(value)
    elif isinstance(value, Enum):
        return value.value
    elif isinstance(value, np.ndarray):
        return value.tolist()
    elif isinstance(value, np.generic):
        return value.item()
    raise TypeError(f"Cannot write {type(value).__name__} as JSON")


def format_json(data: Any) -> str:
    return json.dumps(data, sort_keys=True, indent=2,
                      default=_json_default) + "\n"


def _write_output(args: Namespace, text: str, argv: Sequence[str]):
    if args.output == "-":
        sys.stdout.write(text)
        return

    with open(args.output, "w", newline="") as output_file:
        output_file.write(text)

    # Provenance lives beside the data so the data itself is reproducible
    from . import __version__
    metadata = {"version": __version__,
                "command": list(argv),
                "created": datetime.now(timezone.utc).isoformat(),
                "config": {k: v for k, v in vars(args).items()
                           if k != "command_parser"}}
    try:
        text = format_json(metadata)
    except TypeError as ex:
        raise ConfigError(f"Cannot record run configuration: {ex}", "output")
    with open(args.output + ".meta.json", "w") as meta_file:
        meta_file.write(text)
    logger.info("Wrote %s", args.output)


def _map_rows(args: Namespace, function: Callable, items: Sequence) -> List:
    # map keeps grid order whatever order rows complete in
    with ThreadPoolExecutor(max_workers=max(1, args.jobs)) as executor:
        return list(executor.map(function, items))


# ----------------------------------------------------------------------------
# Commands
# ----------------------------------------------------------------------------
def cmd_beta_table(args: Namespace) -> List[Dict]:
    """Coefficient functions tabulated on a grid of :math:`\\xi`"""
    xi_grid = np.asarray(args.xi, dtype=float)
    if np.any(xi_grid < 0.0):
        raise ConfigError("xi grid must be non-negative", "xi")

    def index_rows(idx):
        values = (beta_eval(idx, xi_grid) if len(xi_grid) > 0 else [])
        return [{"p": idx.p, "q": idx.q, "xi": float(x), "beta": float(b)}
                for x, b in zip(xi_grid, values)]

    return [row for rows in _map_rows(args, index_rows, args.indices)
            for row in rows]


def cmd_matsubara_curves(args: Namespace) -> List[Dict]:
    """Thermal coefficients normalised to their zero-temperature values"""
    if any(not t > 0.0 for t in args.tau_grid):
        raise ConfigError("tau grid must be strictly positive", "tau_grid")
    cfg = _thermal_config(args)

    def row(item):
        idx, tau = item
        try:
            value = matsubara_beta_sum(idx, cfg.with_tau(tau)).value
            zero_temperature = beta_T0_integral(idx, cfg.quad_rel_tol)
        except ConvergenceError as ex:
            logger.warning("Skipping %s at tau=%g: %s", idx, tau, ex)
            return None
        return {"p": idx.p, "q": idx.q, "tau": float(tau),
                "beta_tilde": value,
                "beta_tilde_over_T0": value / zero_temperature}

    items = [(idx, tau) for idx in args.indices for tau in args.tau_grid]
    return [r for r in _map_rows(args, row, items) if r is not None]


def _energy_report(breakdown, run: RunConfig) -> Dict:
    tau = run.resolved_tau
    if breakdown.unit == EnergyUnit.QUANTUM:
        quantum = breakdown.total
    elif tau > 0.0:
        quantum = breakdown.to_unit(EnergyUnit.QUANTUM, tau).total
    else:
        quantum = None

    report = {"unit": breakdown.unit.value, "value": breakdown.total}
    if quantum is not None:
        # The separation alone fixes the SI scale of the quantum unit
        report["U_d4_over_hbar_c_nm3"] = quantum / math.pi
        joules = quantum * constants.NM3 * constants.quantum_energy_scale(run.d)
        report["joules"] = joules
        report["kelvin"] = joules / constants.K_B
    return report


def cmd_potential(args: Namespace) -> Dict:
    """Potential of one particle with a full term breakdown"""
    runs = _run_configs(args)
    if len(runs) != 1:
        raise ConfigError("potential takes a single temperature", "temperature")
    run = runs[0]
    tau = run.resolved_tau
    alpha = _get_polarizability(args.alpha)
    alpha_input = alpha.components.tolist()

    with catch_warnings(record=True) as caught:
        simplefilter("always")
        geom = _surface_geometry(args, run.d_nm)

        if args.method == "full":
            breakdown = u_full(alpha, geom, _thermal_config(args, tau))
        else:
            if geom.frame != Frame.PRINCIPAL:
                geom, alpha = to_principal_frame(geom, alpha)
            if args.method == "retarded":
                breakdown = u_retarded(alpha, geom, tau, args.verbatim)
            else:
                breakdown = u_classical(alpha, geom, tau)

    messages = [str(w.message) for w in caught]
    for m in messages:
        logger.warning(m)

    s1, s2 = geom.dimensionless_curvatures
    return {"inputs": {"d_nm": run.d_nm, "temperature": run.temperature,
                       "tau": run.tau, "method": args.method,
                       "profile": args.profile,
                       "alpha_nm3": alpha_input},
            "dimensionless": {"tau": tau, "d_over_R1": s1, "d_over_R2": s2,
                              "gradient":
                                  geom.mean_curvature_gradient.tolist()},
            "breakdown": breakdown.as_dict(),
            "energy": _energy_report(breakdown, run),
            "warnings": sorted(set(messages))}


def cmd_orientation_scan(args: Namespace) -> List[Dict]:
    """Energy of a rotated particle, one block of rows per temperature"""
    runs = _run_configs(args)
    alpha = _get_polarizability(args.alpha)
    geom = _surface_geometry(args, args.d_nm)
    angles = [(theta, phi) for theta in args.theta_grid
              for phi in args.phi_grid]

    def scan(run):
        tau = run.resolved_tau
        result = orientation_scan(alpha, geom, _thermal_config(args, tau),
                                  angles)
        return [{"tau": tau, "theta": s.theta, "phi": s.phi,
                 "energy": s.energy, "is_min": i == result.argmin}
                for i, s in enumerate(result.samples)]

    return [row for rows in _map_rows(args, scan, runs) for row in rows]


_COMMANDS = {
    "beta-table": (cmd_beta_table, BETA_TABLE_COLUMNS),
    "matsubara-curves": (cmd_matsubara_curves, MATSUBARA_CURVE_COLUMNS),
    "potential": (cmd_potential, None),
    "orientation-scan": (cmd_orientation_scan, ORIENTATION_COLUMNS)}


# ----------------------------------------------------------------------------
# Parser
# ----------------------------------------------------------------------------
def _add_common_arguments(parser: ArgumentParser):
    parser.add_argument("--output", default="-", help="Output path, '-' for stdout")
    parser.add_argument("--format", choices=["csv", "json"], default="csv", help="Output format")
    parser.add_argument("--tol", type=float, default=1e-12, help="Relative truncation tolerance of the Matsubara sums")
    parser.add_argument("--quad-tol", type=float, default=1e-11, help="Relative tolerance of the zero-temperature integrals")
    parser.add_argument("--config", help="Flat 'key = value' file of option defaults")
    parser.add_argument("--jobs", type=int, default=cpu_count(logical=False) or 1, help="Number of worker threads")


def _add_particle_arguments(parser: ArgumentParser):
    parser.add_argument("--d-nm", type=float, default=100.0, help="Particle-surface separation (nm)")
    parser.add_argument("--temperature", type=parse_floats, help="Temperature(s) (K)")
    parser.add_argument("--tau", type=parse_floats, help="Dimensionless temperature(s) d/lambda_T")
    parser.add_argument("--alpha", type=parse_floats, default=[1.0], help="Polarizability (nm^3): 1, 3 (xx,yy,zz), 6 (xx,yy,zz,xy,xz,yz) or 9 values")
    parser.add_argument("--profile", choices=["plane", "sphere", "cylinder", "corrugation", "principal", "grid"], default="plane", help="Surface profile")
    parser.add_argument("--radius-nm", type=float, default=math.inf, help="Sphere or cylinder radius (nm)")
    parser.add_argument("--axis-angle", type=float, default=0.5 * math.pi, help="Cylinder axis or corrugation direction angle to x (rad)")
    parser.add_argument("--amplitude-nm", type=float, default=0.0, help="Corrugation amplitude (nm)")
    parser.add_argument("--period-nm", type=float, default=math.inf, help="Corrugation period (nm)")
    parser.add_argument("--r1-nm", type=float, default=math.inf, help="Signed principal radius along x (nm)")
    parser.add_argument("--r2-nm", type=float, default=math.inf, help="Signed principal radius along y (nm)")
    parser.add_argument("--grad-lap", type=parse_floats, help="Gradient of 1/R1 + 1/R2 along x and y (1/nm^2)")
    parser.add_argument("--height-grid", help="Height grid file for grid profiles")


def get_parser() -> ArgumentParser:
    parser = ArgumentParser(prog="pycasimir", description="Finite-temperature Casimir-Polder potentials near curved surfaces")
    parser.add_argument("--log-level", default="warning", help="Logging level")
    subparsers = parser.add_subparsers(dest="command", required=True)

    beta_table = subparsers.add_parser("beta-table", help="Tabulate coefficient functions")
    beta_table.add_argument("--xi", type=parse_grid, default=parse_grid("0:30:61"), help="xi grid, start:stop:count or list")
    beta_table.add_argument("--indices", type=parse_indices, default=list(ALL_INDICES), help="'all' or e.g. '0,1;4,2'")
    _add_common_arguments(beta_table)

    curves = subparsers.add_parser("matsubara-curves", help="Normalised thermal coefficients")
    curves.add_argument("--tau-grid", type=parse_grid, default=parse_grid("0.05:8:160"), help="tau grid, start:stop:count or list")
    curves.add_argument("--indices", type=parse_indices, default=list(ALL_INDICES), help="'all' or e.g. '0,1;4,2'")
    _add_common_arguments(curves)

    potential = subparsers.add_parser("potential", help="Evaluate the potential")
    potential.add_argument("--method", choices=["full", "retarded", "classical"], default="full", help="Full Matsubara sums or a closed-form limit")
    potential.add_argument("--verbatim", action="store_true", help="Use the commonly quoted low-temperature coefficients")
    _add_particle_arguments(potential)
    _add_common_arguments(potential)

    scan = subparsers.add_parser("orientation-scan", help="Scan particle orientations")
    scan.add_argument("--theta-grid", type=parse_grid, default=[0.0], help="Tilt angles (rad)")
    scan.add_argument("--phi-grid", type=parse_grid, default=parse_grid("0:3.141592653589793:13"), help="In-plane angles (rad)")
    _add_particle_arguments(scan)
    _add_common_arguments(scan)

    for name, sub in subparsers.choices.items():
        sub.set_defaults(command_parser=sub)
    return parser


def _parse(argv: Sequence[str]) -> Namespace:
    parser = get_parser()
    args = parser.parse_args(argv)
    if args.config is not None:
        _apply_config(args.command_parser, args.config)
        args = parser.parse_args(argv)
    return args


def main(argv: Optional[Sequence[str]] = None) -> int:
    argv = sys.argv[1:] if argv is None else list(argv)
    try:
        args = _parse(argv)
        init_logging(args.log_level.upper())

        command, columns = _COMMANDS[args.command]
        logger.info("Running %s", args.command)
        result = command(args)
        if args.format == "json" or columns is None:
            text = (format_json(result) if args.format == "json"
                    else format_csv(("key", "value"), _flatten(result)))
        else:
            text = format_csv(columns, result)
        _write_output(args, text, argv)
    except (ConfigError, ValidationError, DomainError, BetaIndexError) as ex:
        logger.error("%s", ex)
        return EXIT_CONFIG
    except ConvergenceError as ex:
        logger.error("%s", ex)
        return EXIT_CONVERGENCE
    except OSError as ex:
        logger.error("%s", ex)
        return EXIT_IO
    except CasimirError as ex:
        logger.error("%s", ex)
        return EXIT_CONFIG
    return EXIT_OK


def _flatten(data: Any, prefix: str = "") -> List[Dict]:
    # Nested report as key,value rows with dotted keys
    if isinstance(data, dict):
        return [row for k in sorted(data)
                for row in _flatten(data[k], f"{prefix}{k}.")]
    elif isinstance(data, list):
        return [row for i, v in enumerate(data)
                for row in _flatten(v, f"{prefix}{i}.")]
    else:
        return [{"key": prefix[:-1], "value": data}]


if __name__ == "__main__":
    sys.exit(main())
