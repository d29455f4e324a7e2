"""COMMAND LINE FRONT END

    python cli.py eos --beta-min 0.01 --beta-max 0.99 --n 99
    python cli.py hyp --rho-n 1 --rho-s 1 --u-n 0 --u-s 0
    python cli.py shock --rho-n 1 --rho-s 1 --u-n 1 --u-s 0 --sigma0 0 --output-dir shocks
    python cli.py simulate --config experiments/reference_riemann.cfg --output-dir output
    python cli.py waves --frame output/frame_1.csv --slope-tol 0.01
"""
# pylint: disable=import-error,too-many-return-statements,inconsistent-return-statements
import argparse
import logging
import sys
from typing import Optional, Sequence

import numpy as np

from api_utilities.exceptions import (
    CflViolation,
    ConfigError,
    ConversionFailure,
    NotHyperbolic,
    QuadratureNotConverged,
    SeedJacobianSingular,
)
from bose_eos import DEFAULT_DIMENSION, F0, F2, entropy_S, entropy_S_prime
from fvm import DEFAULT_CFL, DEFAULT_SLOPE_TOL, count_plateaus, run
from hyperbolicity import check_conditions, eigenvalues, eigenvector, genuine_nonlinearity, interlacing
from rankine_hugoniot import DEFAULT_KICK, Direction, trace_shock_curve
from readers import ExperimentConfigReader, FrameCSVReader
from state_model import ModelParams, PrimitiveState
from writers import EosTableWriter, FrameWriter, GnuplotWriter, MonitorWriter, ShockCurveWriter

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_NOT_HYPERBOLIC = 1
EXIT_MONOTONICITY = 2
EXIT_USAGE = 64
EXIT_NO_INPUT = 66
EXIT_SOFTWARE = 70
EXIT_CANT_CREATE = 73

LOG_FORMAT = "%(asctime)s %(levelname)s %(name)s: %(message)s"
WAVE_FIELDS = ("rho_n", "rho_s", "u_n", "u_s")
SOLVER_ABORTS = (ConversionFailure, CflViolation, QuadratureNotConverged, SeedJacobianSingular)


class UsageParser(argparse.ArgumentParser):
    """ArgumentParser exiting with the usage code on bad flags"""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _add_state(parser: argparse.ArgumentParser, required: bool = True) -> None:
    for name in ("rho-n", "rho-s", "u-n", "u-s"):
        parser.add_argument(f"--{name}", type=float, required=required)


def _add_params(parser: argparse.ArgumentParser, c_tilde: Optional[float] = 0.6) -> None:
    parser.add_argument("--alpha", type=float, default=None if c_tilde is None else 1.0)
    parser.add_argument("--c-tilde", type=float, default=c_tilde)


def build_parser() -> UsageParser:
    """Parser with the eos, hyp, shock, simulate and waves subcommands"""
    parser = UsageParser(prog="cli.py", description="Two-fluid Bose gas toolkit")
    parser.add_argument(
        "--log-level", default="WARNING", choices=["DEBUG", "INFO", "WARNING", "ERROR"]
    )
    commands = parser.add_subparsers(dest="command", required=True)

    eos = commands.add_parser("eos", help="tabulate F0, F2, S and S' over the fugacity")
    eos.add_argument("--beta-min", type=float, default=0.01)
    eos.add_argument("--beta-max", type=float, default=0.99)
    eos.add_argument("--n", type=int, default=99)
    eos.add_argument("--dimension", "-N", type=int, default=DEFAULT_DIMENSION)
    eos.add_argument("--output", default=None, help="csv file, stdout when omitted")
    eos.add_argument("--gnuplot", action="store_true")

    hyp = commands.add_parser("hyp", help="hyperbolicity report at one state")
    _add_state(hyp)
    _add_params(hyp)

    shock = commands.add_parser("shock", help="trace shock curves from a left state")
    _add_state(shock)
    _add_params(shock)
    shock.add_argument("--sigma0", type=float, required=True)
    shock.add_argument("--span", type=float, default=0.2)
    shock.add_argument("--steps", type=int, default=50)
    shock.add_argument("--direction", choices=["both", "increasing", "decreasing"], default="both")
    shock.add_argument("--kick", type=float, default=DEFAULT_KICK)
    shock.add_argument("--output-dir", default=".")
    shock.add_argument("--name", default="shock")
    shock.add_argument("--gnuplot", action="store_true")

    simulate = commands.add_parser("simulate", help="run a Riemann experiment")
    simulate.add_argument("--config", required=True)
    _add_params(simulate, c_tilde=None)
    simulate.add_argument("--n-cells", type=int)
    simulate.add_argument("--t-final", type=float)
    simulate.add_argument("--cfl", type=float, help=f"default {DEFAULT_CFL}")
    simulate.add_argument("--fixed-ratio", type=float)
    simulate.add_argument("--output-every", type=int)
    simulate.add_argument("--branch-policy", choices=["persist", "normal_faster", "super_faster"])
    simulate.add_argument("--output-dir", default="output")
    simulate.add_argument("--gnuplot", action="store_true")

    waves = commands.add_parser("waves", help="count constant states in a frame csv")
    waves.add_argument("--frame", required=True)
    waves.add_argument("--slope-tol", type=float, default=DEFAULT_SLOPE_TOL)
    waves.add_argument("--min-width", type=int, default=None)
    waves.add_argument("--fields", nargs="+", choices=list(WAVE_FIELDS), default=list(WAVE_FIELDS))
    return parser


def _state(args: argparse.Namespace) -> PrimitiveState:
    return PrimitiveState(args.rho_n, args.rho_s, args.u_n, args.u_s)


def _params(parser: UsageParser, args: argparse.Namespace) -> ModelParams:
    try:
        return ModelParams(args.alpha, args.c_tilde)
    except ValueError as exc:
        parser.error(str(exc))


def cmd_eos(parser: UsageParser, args: argparse.Namespace) -> int:
    """Rows beta,F0,F2,S,S_prime; exit 2 when S' is not negative somewhere"""
    if args.n < 1:
        parser.error("--n must be a positive integer")
    if args.dimension < 1:
        parser.error("--dimension must be a positive integer")
    if not 0 < args.beta_min <= args.beta_max < 1 or (args.n > 1 and args.beta_min == args.beta_max):
        parser.error("need 0 < beta_min < beta_max < 1")

    rows = []
    for beta in np.linspace(args.beta_min, args.beta_max, args.n):
        beta = float(beta)
        rows.append(
            (
                beta,
                F0(beta, args.dimension),
                F2(beta, args.dimension),
                entropy_S(beta, args.dimension),
                entropy_S_prime(beta, args.dimension),
            )
        )

    if args.output:
        folder, _, name = args.output.rpartition("/")
        name = name[:-4] if name.endswith(".csv") else name
        writer = EosTableWriter(bucket=folder or ".", destination="local_csv")
        written = writer.write_data({"rows": rows, "name": name})
        if args.gnuplot and written:
            GnuplotWriter(bucket=folder or ".").write_data(
                {"name": name, "csv_files": [written], "x": "beta", "y": ["S", "S_prime"]}
            )
    else:
        EosTableWriter().write_data({"rows": rows, "name": "eos"})

    if any(row[-1] >= 0 for row in rows):
        logger.error("S' is not negative on the whole range")
        return EXIT_MONOTONICITY
    return EXIT_OK


def cmd_hyp(parser: UsageParser, args: argparse.Namespace) -> int:
    """Conditions, spectrum, interlacing and genuine nonlinearity at one state"""
    if not (args.rho_n > 0 and args.rho_s > 0):
        parser.error("densities must be positive")
    p = _params(parser, args)
    U = _state(args)

    conditions = check_conditions(U, p)
    print(
        f"cond1={conditions.cond1} cond2={conditions.cond2} cond3={conditions.cond3} "
        f"P(mid)>0={conditions.midpoint_positive}"
    )
    spectrum = eigenvalues(U, p)
    print(f"certified={spectrum.certified}")
    brackets = spectrum.brackets or ((float("nan"), float("nan")),) * len(spectrum.lambdas)
    for index, (lam, (low, high)) in enumerate(zip(spectrum.lambdas, brackets), start=1):
        print(f"lambda_{index}={lam!r} bracket=[{low!r}, {high!r}]")
    if not spectrum.certified:
        print("not certified hyperbolic")
        return EXIT_NOT_HYPERBOLIC

    pattern = interlacing(spectrum, U, p)
    print(f"interlacing superfluid={pattern.superfluid} normal={pattern.normal} midpoint={pattern.midpoint}")
    for index, lam in enumerate(spectrum.lambdas, start=1):
        vector = eigenvector(lam, U, p)
        nonlinearity = genuine_nonlinearity(lam, U, p)
        print(
            f"field_{index} X={[float(entry) for entry in vector]} "
            f"grad.X={nonlinearity.value!r} genuinely_nonlinear={nonlinearity.certified_nonzero}"
        )
    return EXIT_OK


def cmd_shock(parser: UsageParser, args: argparse.Namespace) -> int:
    """One csv per traced half"""
    if not (args.rho_n > 0 and args.rho_s > 0):
        parser.error("densities must be positive")
    if args.steps < 1 or not args.span > 0 or args.kick < 0:
        parser.error("need steps >= 1, span > 0 and kick >= 0")
    p = _params(parser, args)
    U = _state(args)

    directions = list(Direction) if args.direction == "both" else [Direction(args.direction)]
    curves = [
        trace_shock_curve(U, args.sigma0, args.span, args.steps, p, direction, args.kick)
        for direction in directions
    ]
    writer = ShockCurveWriter(bucket=args.output_dir, params=p)
    written = []
    for direction, curve in zip(directions, curves):
        path = writer.write_data({"curve": curve, "name": f"{args.name}_{direction.value}"})
        if path:
            written.append(path)
        if curve.truncated:
            logger.warning("%s half stopped early: %s", direction.value, curve.truncation_reason)
    if args.gnuplot and written:
        GnuplotWriter(bucket=args.output_dir).write_data(
            {"name": args.name, "csv_files": written, "x": "sigma", "y": ["rho_n+", "rho_s+"]}
        )
    return EXIT_OK


def cmd_simulate(parser: UsageParser, args: argparse.Namespace) -> int:
    """Frames frame_<index>.csv and monitors.csv in the output directory"""
    overrides = {
        "alpha": args.alpha,
        "c_tilde": args.c_tilde,
        "n_cells": args.n_cells,
        "t_final": args.t_final,
        "cfl": args.cfl,
        "fixed_ratio": args.fixed_ratio,
        "output_every": args.output_every,
        "branch_policy": args.branch_policy,
    }
    try:
        setup = ExperimentConfigReader(args.config).read(overrides)
    except OSError as exc:
        logger.error("cannot read %s: %s", args.config, exc)
        return EXIT_NO_INPUT
    frames = run(setup.cfg, setup.grid, setup.U_left, setup.U_right, setup.params)

    frame_writer = FrameWriter(bucket=args.output_dir)
    for index, frame in enumerate(frames):
        frame_writer.write_data({"frame": frame, "index": index})
    MonitorWriter(bucket=args.output_dir).write_data({"frames": frames})
    if args.gnuplot:
        GnuplotWriter(bucket=args.output_dir).write_data(
            {"name": "frames", "csv_files": frame_writer.written, "x": "x", "y": ["rho_n"]}
        )
    last = frames[-1]
    plateaus = count_plateaus(last, "rho_n", setup.cfg.slope_tol, setup.cfg.min_width)
    logger.info("t=%s: %d rho_n plateaus", last.t, plateaus)
    return EXIT_OK


def cmd_waves(parser: UsageParser, args: argparse.Namespace) -> int:
    """Prints field,plateaus for each requested field"""
    if not args.slope_tol > 0 or (args.min_width is not None and args.min_width < 1):
        parser.error("need slope_tol > 0 and min_width >= 1")
    try:
        profile = FrameCSVReader(args.frame).read()
    except (OSError, ValueError) as exc:
        logger.error("cannot read %s: %s", args.frame, exc)
        return EXIT_NO_INPUT
    print("field,plateaus")
    for name in args.fields:
        print(f"{name},{count_plateaus(profile, name, args.slope_tol, args.min_width)}")
    return EXIT_OK


COMMANDS = {
    "eos": cmd_eos,
    "hyp": cmd_hyp,
    "shock": cmd_shock,
    "simulate": cmd_simulate,
    "waves": cmd_waves,
}


def main(argv: Optional[Sequence[str]] = None) -> int:
    """Parses argv, runs the subcommand and maps failures to exit codes"""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    logging.basicConfig(level=getattr(logging, args.log_level), format=LOG_FORMAT)

    try:
        return COMMANDS[args.command](parser, args)
    except SystemExit as exc:
        return int(exc.code or 0)
    except NotHyperbolic as exc:
        logger.error("%s", exc)
        return EXIT_NOT_HYPERBOLIC
    except SOLVER_ABORTS as exc:
        logger.error("solver aborted: %s", exc)
        return EXIT_SOFTWARE
    except ConfigError as exc:
        logger.error("invalid experiment: %s", exc)
        return EXIT_NO_INPUT
    except OSError as exc:
        logger.error("cannot create output: %s", exc)
        return EXIT_CANT_CREATE


if __name__ == "__main__":
    sys.exit(main())
