"""FINITE VOLUME MODULE

Lax-Friedrichs solver for the conservative two-fluid system on a uniform
one dimensional grid, with Riemann initial data, outflow ghost cells and
per-frame conservation and hyperbolicity monitors. Also holds the plateau
counter and the two shock locators used to read wave structure off a frame.
"""
# pylint: disable=invalid-name,import-error,too-many-instance-attributes,too-many-arguments,too-many-locals
import logging
from dataclasses import dataclass
from typing import Any, Dict, List, Mapping, NamedTuple, Optional, Union

import numpy as np

from api_utilities.exceptions import (
    ConfigError,
    ConversionFailure,
    NegativeDiscriminant,
    NonpositiveDensity,
    NotHyperbolic,
)
from bose_eos import EosTable
from entropy_pair import convexity_conditions, entropy_E
from hyperbolicity import batch_is_hyperbolic, batch_max_wave_speed, check_conditions
from solver_policies import BranchPolicyFactory, FixedBranch, TimeStepPolicyFactory
from state_model import (
    ConservedState,
    ModelParams,
    PrimitiveState,
    flux,
    pressure,
    to_conserved,
    to_primitive,
)

logger = logging.getLogger(__name__)

DEFAULT_CFL = 0.9
DEFAULT_SLOPE_TOL = 1e-3
MERGE_FACTOR = 10.0
FLAT_SPREAD_TOL = 1e-12
FRAME_FIELDS = ("rho_n", "rho_s", "u_n", "u_s", "p", "E")


@dataclass(frozen=True)
class Grid1D:
    """Uniform grid of n_cells cells on [x_min, x_max]"""

    x_min: float
    x_max: float
    n_cells: int

    def __post_init__(self):
        if not self.x_min < self.x_max:
            raise ValueError(f"x_min must be below x_max, got [{self.x_min}, {self.x_max}]")
        if int(self.n_cells) != self.n_cells or self.n_cells < 1:
            raise ValueError(f"n_cells must be a positive integer, got {self.n_cells}")

    @property
    def dx(self) -> float:
        """Cell width"""
        return (self.x_max - self.x_min) / self.n_cells

    @property
    def centers(self) -> np.ndarray:
        """x_j = x_min + (j + 1/2) dx"""
        return self.x_min + (np.arange(self.n_cells) + 0.5) * self.dx

    @property
    def length(self) -> float:
        """x_max - x_min"""
        return self.x_max - self.x_min


def default_min_width(n_cells: int) -> int:
    """max(5, n_cells // 100)"""
    return max(5, n_cells // 100)


@dataclass(frozen=True)
class SolverConfig:
    """Run settings; fixed_ratio, when given, replaces the CFL rule for dt"""

    t_final: float
    cfl: float = DEFAULT_CFL
    fixed_ratio: Optional[float] = None
    output_every: int = 1
    branch_policy: str = "persist"
    boundary: str = "outflow"
    slope_tol: float = DEFAULT_SLOPE_TOL
    min_width: Optional[int] = None

    def __post_init__(self):
        if not self.t_final > 0:
            raise ValueError(f"t_final must be positive, got {self.t_final}")
        if not 0 < self.cfl <= 1:
            raise ValueError(f"cfl must lie in (0, 1], got {self.cfl}")
        if self.fixed_ratio is not None and not self.fixed_ratio > 0:
            raise ValueError(f"fixed_ratio must be positive, got {self.fixed_ratio}")
        if int(self.output_every) != self.output_every or self.output_every < 1:
            raise ValueError(f"output_every must be a positive integer, got {self.output_every}")
        if self.boundary != "outflow":
            raise ValueError(f"only outflow boundaries are supported, got {self.boundary}")
        if not self.slope_tol > 0:
            raise ValueError(f"slope_tol must be positive, got {self.slope_tol}")
        if self.min_width is not None and self.min_width < 1:
            raise ValueError(f"min_width must be a positive integer, got {self.min_width}")
        BranchPolicyFactory().get_policy(self.branch_policy)

    @property
    def time_step_policy(self):
        """Policy governing dt each step"""
        return TimeStepPolicyFactory().get_policy(self.cfl, self.fixed_ratio)


@dataclass
class SimulationFrame:
    """Snapshot of a run with its monitors"""

    t: float
    step: int
    grid: Grid1D
    conserved: ConservedState
    primitive: PrimitiveState
    totals: np.ndarray
    boundary_outflow: np.ndarray
    hyperbolic_everywhere: bool
    cond3_everywhere: bool
    convex_everywhere: bool
    min_density: float
    params: ModelParams

    @property
    def x(self) -> np.ndarray:
        """Cell centers"""
        return self.grid.centers

    @property
    def dx(self) -> float:
        """Cell width"""
        return self.grid.dx

    @property
    def total_mass_n(self) -> float:
        """dx * sum of rho_n"""
        return float(self.totals[0])

    @property
    def total_mass_s(self) -> float:
        """dx * sum of rho_s"""
        return float(self.totals[1])

    @property
    def total_momentum(self) -> float:
        """dx * sum of m"""
        return float(self.totals[2])

    @property
    def total_energy(self) -> float:
        """dx * sum of e"""
        return float(self.totals[3])

    @property
    def corrected_totals(self) -> np.ndarray:
        """Totals plus what left through the boundaries; constant in time"""
        return self.totals + self.boundary_outflow

    def field(self, name: str) -> np.ndarray:
        """Cell values of rho_n, rho_s, u_n, u_s, p or E"""
        if name == "p":
            return np.asarray(pressure(self.primitive, self.params))
        if name == "E":
            return np.asarray(entropy_E(self.primitive, self.params))
        if name in ("rho_n", "rho_s", "u_n", "u_s"):
            return np.asarray(getattr(self.primitive, name))
        raise KeyError(f"unknown field {name!r}, expecting one of {list(FRAME_FIELDS)}")


CONFIG_DEFAULTS: Dict[str, Any] = {
    "x_min": -1.0,
    "x_max": 1.0,
    "cfl": DEFAULT_CFL,
    "fixed_ratio": None,
    "output_every": 1,
    "branch_policy": "persist",
    "slope_tol": DEFAULT_SLOPE_TOL,
    "min_width": None,
}
STATE_KEYS = ("rho_n", "rho_s", "u_n", "u_s")
REQUIRED_KEYS = ("alpha", "n_cells", "t_final") + tuple(
    f"{side}.{name}" for side in ("left", "right") for name in STATE_KEYS
)
KNOWN_KEYS = frozenset(REQUIRED_KEYS) | frozenset(CONFIG_DEFAULTS) | {"c_tilde", "beta0"}


@dataclass(frozen=True)
class SimulationSetup:
    """Everything run needs, assembled from a flat experiment config"""

    params: ModelParams
    grid: Grid1D
    cfg: SolverConfig
    U_left: PrimitiveState
    U_right: PrimitiveState

    @classmethod
    def from_mapping(
        cls, config: Mapping[str, Any], overrides: Optional[Mapping[str, Any]] = None
    ) -> "SimulationSetup":
        """Builds a setup from dotted keys; overrides win over config values

        Raises:
            ConfigError: unknown, missing, conflicting or invalid keys
        """
        merged: Dict[str, Any] = dict(CONFIG_DEFAULTS)
        merged.update(config)
        merged.update({key: value for key, value in (overrides or {}).items() if value is not None})

        unknown = sorted(set(merged) - KNOWN_KEYS)
        if unknown:
            raise ConfigError(f"unknown config keys {unknown}, allowed values: {sorted(KNOWN_KEYS)}")
        missing = [key for key in REQUIRED_KEYS if key not in merged]
        if missing:
            raise ConfigError(f"missing config keys {missing}")
        if ("c_tilde" in merged) == ("beta0" in merged):
            raise ConfigError("give exactly one of c_tilde and beta0")

        try:
            if "beta0" in merged:
                table = EosTable.from_beta0(float(merged["beta0"]))
                params = table.to_model_params(float(merged["alpha"]))
                logger.info("beta0=%s gives c_tilde=%r", merged["beta0"], params.c_tilde)
            else:
                params = ModelParams(float(merged["alpha"]), float(merged["c_tilde"]))
            grid = Grid1D(float(merged["x_min"]), float(merged["x_max"]), int(merged["n_cells"]))
            cfg = SolverConfig(
                t_final=float(merged["t_final"]),
                cfl=float(merged["cfl"]),
                fixed_ratio=None if merged["fixed_ratio"] is None else float(merged["fixed_ratio"]),
                output_every=int(merged["output_every"]),
                branch_policy=str(merged["branch_policy"]),
                slope_tol=float(merged["slope_tol"]),
                min_width=None if merged["min_width"] is None else int(merged["min_width"]),
            )
            left, right = (
                PrimitiveState(*(float(merged[f"{side}.{name}"]) for name in STATE_KEYS))
                for side in ("left", "right")
            )
        except KeyError as exc:
            raise ConfigError(str(exc)) from exc
        except (TypeError, ValueError) as exc:
            raise ConfigError(f"invalid config value: {exc}") from exc
        return cls(params, grid, cfg, left, right)


def riemann_initial_data(
    Uleft: PrimitiveState, Uright: PrimitiveState, grid: Grid1D, p: ModelParams
) -> ConservedState:
    """Cells with center below zero take F(Uleft), the others F(Uright)"""
    if not grid.x_min < 0 < grid.x_max:
        raise ValueError(f"the jump at x = 0 must lie inside ({grid.x_min}, {grid.x_max})")
    left = to_conserved(Uleft, p).as_array()
    right = to_conserved(Uright, p).as_array()
    on_left = grid.centers < 0
    return ConservedState.from_array(np.where(on_left[None, :], left[:, None], right[:, None]))


def recover_primitive(
    cells: ConservedState, signs: np.ndarray, p: ModelParams, t: float
) -> PrimitiveState:
    """to_primitive on every cell, failures reported with the first bad cell and the time"""
    try:
        return to_primitive(cells, signs, p)
    except (NegativeDiscriminant, NonpositiveDensity) as exc:
        cell = exc.cells[0] if exc.cells else -1
        raise ConversionFailure(str(exc), cell=cell, time=t) from exc


def lax_friedrichs_update(U: np.ndarray, H: np.ndarray, dt: float, dx: float) -> np.ndarray:
    """U_j <- (U_{j-1} + U_{j+1})/2 - dt/(2dx) (H_{j+1} - H_{j-1}) with copied ghost cells

    Args:
        U (np.ndarray): (k, n) cell averages
        H (np.ndarray): (k, n) fluxes at the same cells
    """
    padded_U = np.pad(U, ((0, 0), (1, 1)), mode="edge")
    padded_H = np.pad(H, ((0, 0), (1, 1)), mode="edge")
    return 0.5 * (padded_U[:, :-2] + padded_U[:, 2:]) - dt / (2.0 * dx) * (
        padded_H[:, 2:] - padded_H[:, :-2]
    )


def _courant(dt: float, primitive: PrimitiveState, grid: Grid1D, p: ModelParams) -> float:
    return float(dt * np.max(batch_max_wave_speed(primitive, p)) / grid.dx)


def lax_friedrichs_step(
    cells: ConservedState,
    dt: float,
    grid: Grid1D,
    cfg: SolverConfig,
    p: ModelParams,
    signs: Optional[np.ndarray] = None,
    t: float = 0.0,
) -> ConservedState:
    """One Lax-Friedrichs step with outflow ghosts

    Args:
        signs (Optional[np.ndarray]): cell branch signs, required under the persist policy
        t (float): time of the step, used in diagnostics

    Raises:
        CflViolation: dt max|lambda| / dx above one under the cfl policy
        ConversionFailure: a cell cannot be inverted
    """
    if not dt > 0:
        raise ValueError(f"dt must be positive, got {dt}")
    if signs is None:
        policy = BranchPolicyFactory().get_policy(cfg.branch_policy)
        if not isinstance(policy, FixedBranch):
            raise ValueError("the persist branch policy needs the cell signs")
        signs = np.full(np.shape(cells.rho_n), float(policy.branch.value))
    primitive = recover_primitive(cells, signs, p, t)
    cfg.time_step_policy.check(_courant(dt, primitive, grid, p), t)
    U = cells.as_array()
    H = flux(primitive, p).as_array()
    return ConservedState.from_array(lax_friedrichs_update(U, H, dt, grid.dx))


def _frame(
    t: float,
    step: int,
    cells: ConservedState,
    primitive: PrimitiveState,
    outflow: np.ndarray,
    grid: Grid1D,
    p: ModelParams,
) -> SimulationFrame:
    conditions = check_conditions(primitive, p)
    return SimulationFrame(
        t=t,
        step=step,
        grid=grid,
        conserved=cells,
        primitive=primitive,
        totals=grid.dx * np.sum(cells.as_array(), axis=1),
        boundary_outflow=outflow.copy(),
        hyperbolic_everywhere=bool(np.all(batch_is_hyperbolic(primitive, p))),
        cond3_everywhere=bool(np.all(conditions.cond3)),
        convex_everywhere=bool(np.all(convexity_conditions(primitive, p).convex)),
        min_density=float(min(np.min(primitive.rho_n), np.min(primitive.rho_s))),
        params=p,
    )


def run(
    cfg: SolverConfig,
    grid: Grid1D,
    Uleft: PrimitiveState,
    Uright: PrimitiveState,
    p: ModelParams,
) -> List[SimulationFrame]:
    """Solves the Riemann problem up to t_final

    Frames are kept at t = 0, every output_every steps and at t_final, which
    the last step is clipped to hit exactly.

    Raises:
        NotHyperbolic: an initial cell satisfies none of the three conditions
        ConversionFailure: primitive recovery failed, the run is aborted
        CflViolation: under the cfl policy only
    """
    cells = riemann_initial_data(Uleft, Uright, grid, p)
    initial = PrimitiveState(
        *(np.where(grid.centers < 0, left, right) for left, right in zip(Uleft.astuple(), Uright.astuple()))
    )
    if not np.all(check_conditions(initial, p).any):
        raise NotHyperbolic("initial data satisfy none of the hyperbolicity conditions")

    signs = BranchPolicyFactory().get_policy(cfg.branch_policy).initial_signs(initial)
    time_step_policy = cfg.time_step_policy
    outflow = np.zeros(4)
    t, step = 0.0, 0
    primitive = recover_primitive(cells, signs, p, t)
    frames = [_frame(t, step, cells, primitive, outflow, grid, p)]
    logger.info("starting run on %d cells up to t=%s", grid.n_cells, cfg.t_final)

    while t < cfg.t_final:
        max_speed = float(np.max(batch_max_wave_speed(primitive, p)))
        dt = time_step_policy.time_step(max_speed, grid.dx)
        last = t + dt >= cfg.t_final
        if last:
            dt = cfg.t_final - t
        time_step_policy.check(dt * max_speed / grid.dx, t)

        U = cells.as_array()
        H = flux(primitive, p).as_array()
        outflow += dt * (H[:, -1] - H[:, 0])
        cells = ConservedState.from_array(lax_friedrichs_update(U, H, dt, grid.dx))
        t = cfg.t_final if last else t + dt
        step += 1
        try:
            primitive = recover_primitive(cells, signs, p, t)
        except ConversionFailure as exc:
            logger.error("run aborted after %d steps: %s", step, exc)
            raise

        if last or step % cfg.output_every == 0:
            frames.append(_frame(t, step, cells, primitive, outflow, grid, p))
            logger.info("frame %d at t=%.6g (step %d)", len(frames) - 1, t, step)
    return frames


class Plateau(NamedTuple):
    """Cells [start, stop) of a nearly constant stretch and their mean"""

    start: int
    stop: int
    mean: float


def _flat_runs(flat: np.ndarray, min_width: int) -> List[slice]:
    edges = np.diff(np.concatenate(([0], flat.astype(np.int8), [0])))
    starts = np.flatnonzero(edges == 1)
    stops = np.flatnonzero(edges == -1)
    return [slice(start, stop) for start, stop in zip(starts, stops) if stop - start >= min_width]


def find_plateaus(
    values: np.ndarray,
    dx: float,
    slope_tol: float = DEFAULT_SLOPE_TOL,
    min_width: Optional[int] = None,
) -> List[Plateau]:
    """Maximal flat runs, neighbours with close means merged into one plateau

    A cell is flat when |df/dx| < slope_tol * spread / (dx * n), with the
    derivative from numpy.gradient. Runs shorter than min_width are ignored,
    and consecutive runs whose means differ by at most 10 * slope_tol * spread
    count as the same state.
    """
    values = np.asarray(values, dtype=float)
    n = values.size
    if n == 0:
        return []
    if min_width is None:
        min_width = default_min_width(n)
    spread = float(np.max(values) - np.min(values))
    if n < 2 or spread <= FLAT_SPREAD_TOL * max(1.0, float(np.max(np.abs(values)))):
        return [Plateau(0, n, float(np.mean(values)))]

    slope = np.abs(np.gradient(values, dx))
    flat = slope < slope_tol * spread / (dx * n)
    plateaus: List[Plateau] = []
    previous_mean = None
    for run_slice in _flat_runs(flat, min_width):
        mean = float(np.mean(values[run_slice]))
        if previous_mean is not None and abs(mean - previous_mean) <= MERGE_FACTOR * slope_tol * spread:
            last = plateaus[-1]
            width = last.stop - last.start
            length = run_slice.stop - run_slice.start
            merged = (last.mean * width + mean * length) / (width + length)
            plateaus[-1] = Plateau(last.start, run_slice.stop, merged)
        else:
            plateaus.append(Plateau(run_slice.start, run_slice.stop, mean))
        previous_mean = mean
    logger.debug("found %d plateaus in %d cells", len(plateaus), n)
    return plateaus


def count_plateaus(
    frame: Union[SimulationFrame, Any],
    field: str,
    slope_tol: float = DEFAULT_SLOPE_TOL,
    min_width: Optional[int] = None,
) -> int:
    """Number of distinct constant states of a field in a frame

    Args:
        frame: SimulationFrame or anything with ``dx`` and ``field(name)``
        field (str): rho_n, rho_s, u_n or u_s
    """
    return len(find_plateaus(frame.field(field), frame.dx, slope_tol, min_width))


def mass_balance_position(
    frame: SimulationFrame, Uleft: PrimitiveState, Uright: PrimitiveState
) -> float:
    """Jump position x_s solving dx sum(rho_n) = rho_n^-(x_s - x_min) + rho_n^+(x_max - x_s)"""
    jump = Uleft.rho_n - Uright.rho_n
    if jump == 0:
        raise ValueError("equal normal densities on both sides, the mass balance has no root")
    grid = frame.grid
    return float((frame.total_mass_n + Uleft.rho_n * grid.x_min - Uright.rho_n * grid.x_max) / jump)


def level_set_position(
    frame: SimulationFrame, field: str = "rho_n", level: Optional[float] = None
) -> float:
    """First crossing of level (default: halfway between the end values), linearly interpolated"""
    values = frame.field(field)
    x = frame.x
    if level is None:
        level = 0.5 * (values[0] + values[-1])
    shifted = values - level
    crossings = np.flatnonzero(np.sign(shifted[:-1]) * np.sign(shifted[1:]) <= 0)
    if crossings.size == 0:
        raise ValueError(f"{field} never crosses {level!r}")
    j = int(crossings[0])
    if shifted[j] == shifted[j + 1]:
        return float(x[j])
    weight = shifted[j] / (shifted[j] - shifted[j + 1])
    return float(x[j] + weight * (x[j + 1] - x[j]))
