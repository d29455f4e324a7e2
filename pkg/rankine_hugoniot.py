"""RANKINE-HUGONIOT MODULE

Jump conditions across a shock of speed sigma in raw and reduced form, the
jump map J whose level sets are the Hugoniot loci, and damped Newton
continuation of shock curves parametrised by sigma.

J(U, sigma) = J(U-, sigma) holds exactly when U- and U+ are joined by a
shock. Its fourth row is twice the energy flux seen in the frame moving
with the shock.
"""
# pylint: disable=invalid-name,import-error,too-many-arguments,too-many-locals
import logging
from dataclasses import dataclass, field
from enum import Enum
from typing import List, NamedTuple, Optional, Tuple

import numpy as np

from api_utilities.exceptions import (
    DegenerateRoot,
    NonpositiveDensity,
    SeedJacobianSingular,
)
from entropy_pair import shock_entropy_dissipation
from hyperbolicity import eigenvalue_gradient, eigenvalues, eigenvector
from state_model import ModelParams, PrimitiveState, flux, to_conserved

logger = logging.getLogger(__name__)

DEFAULT_KICK = 1e-3
MAX_NEWTON_ITERATIONS = 50
MAX_HALVINGS = 8
CONVERGED_TOL = 1e-13
ACCEPT_TOL = 1e-10
DENSITY_FLOOR = 1e-10
SINGULAR_CONDITION = 1e14
FLAT_FIELD_TOL = 1e-8
LAX_SLACK = 1e-8
FOLD_BISECTIONS = 12
FOLD_DET_RATIO = 0.1


class Direction(Enum):
    """Sense in which sigma moves away from the base speed"""

    INCREASING = "increasing"
    DECREASING = "decreasing"

    @property
    def sign(self) -> float:
        """+1 for increasing sigma, -1 for decreasing"""
        return 1.0 if self is Direction.INCREASING else -1.0


def jump_map(U: PrimitiveState, sigma: float, p: ModelParams) -> np.ndarray:
    """J(U, sigma) in the variables w = u - sigma"""
    rho_n, rho_s = U.rho_n, U.rho_s
    w_n, w_s = U.u_n - sigma, U.u_s - sigma
    pressure_n = p.c_tilde * rho_n ** (5.0 / 3.0)
    mixture = 2.0 * rho_n + rho_s
    return np.array(
        [
            rho_n * w_n,
            rho_s * w_s,
            rho_n * w_n**2 + rho_s * w_s**2 + pressure_n + 0.25 * p.alpha * mixture**2,
            rho_n * w_n**3
            + rho_s * w_s**3
            + 5.0 * pressure_n * w_n
            + p.alpha * mixture * (2.0 * rho_n * w_n + rho_s * w_s),
        ]
    )


def jacobian_J(U: PrimitiveState, sigma: float, p: ModelParams) -> np.ndarray:
    """D_U J(U, sigma) in (rho_n, rho_s, u_n, u_s)"""
    rho_n, rho_s = float(U.rho_n), float(U.rho_s)
    w_n, w_s = float(U.u_n) - sigma, float(U.u_s) - sigma
    c_tilde, alpha = p.c_tilde, p.alpha
    mixture = 2.0 * rho_n + rho_s
    mass_flux = 2.0 * rho_n * w_n + rho_s * w_s
    return np.array(
        [
            [w_n, 0.0, rho_n, 0.0],
            [0.0, w_s, 0.0, rho_s],
            [
                w_n**2 + 5.0 / 3.0 * c_tilde * rho_n ** (2.0 / 3.0) + alpha * mixture,
                w_s**2 + 0.5 * alpha * mixture,
                2.0 * rho_n * w_n,
                2.0 * rho_s * w_s,
            ],
            [
                w_n**3
                + 25.0 / 3.0 * c_tilde * rho_n ** (2.0 / 3.0) * w_n
                + 2.0 * alpha * mass_flux
                + 2.0 * alpha * mixture * w_n,
                w_s**3 + alpha * mass_flux + alpha * mixture * w_s,
                3.0 * rho_n * w_n**2 + 5.0 * c_tilde * rho_n ** (5.0 / 3.0) + 2.0 * alpha * rho_n * mixture,
                3.0 * rho_s * w_s**2 + alpha * rho_s * mixture,
            ],
        ]
    )


def rh_residual(
    Uminus: PrimitiveState, Uplus: PrimitiveState, sigma: float, p: ModelParams
) -> np.ndarray:
    """[H(U)] - sigma [F(U)]"""
    flux_jump = flux(Uplus, p).as_array() - flux(Uminus, p).as_array()
    state_jump = to_conserved(Uplus, p).as_array() - to_conserved(Uminus, p).as_array()
    return flux_jump - sigma * state_jump


def rh_reduced_residual(
    Uminus: PrimitiveState, Uplus: PrimitiveState, sigma: float, p: ModelParams
) -> np.ndarray:
    """Jump relations in mass fluxes M = rho w and specific volumes tau = 1/rho, M from the minus state

    Raises:
        NonpositiveDensity: a density of either state is not positive
    """
    states = (Uminus, Uplus)
    if any(not (U.rho_n > 0 and U.rho_s > 0) for U in states):
        raise NonpositiveDensity("specific volumes need positive densities on both sides")
    M_n = Uminus.rho_n * (Uminus.u_n - sigma)
    M_s = Uminus.rho_s * (Uminus.u_s - sigma)

    def jump(quantity):
        return quantity(Uplus) - quantity(Uminus)

    return np.array(
        [
            jump(lambda U: U.rho_n * (U.u_n - sigma)),
            jump(lambda U: U.rho_s * (U.u_s - sigma)),
            M_n**2 * jump(lambda U: 1.0 / U.rho_n)
            + M_s**2 * jump(lambda U: 1.0 / U.rho_s)
            + p.c_tilde * jump(lambda U: U.rho_n ** (5.0 / 3.0))
            + 0.25 * p.alpha * jump(lambda U: (2.0 * U.rho_n + U.rho_s) ** 2),
            M_n**3 * jump(lambda U: U.rho_n ** -2.0)
            + M_s**3 * jump(lambda U: U.rho_s ** -2.0)
            + 5.0 * p.c_tilde * M_n * jump(lambda U: U.rho_n ** (2.0 / 3.0))
            + p.alpha * (2.0 * M_n + M_s) * jump(lambda U: 2.0 * U.rho_n + U.rho_s),
        ]
    )


@dataclass(frozen=True)
class ShockPoint:
    """Right state joined to the curve's left state by a shock of speed sigma"""

    sigma: float
    U_plus: PrimitiveState
    residual_norm: float
    dissipation: float


@dataclass
class ShockCurve:
    """Points of one half of a Hugoniot locus, ordered away from the base speed"""

    U_minus: PrimitiveState
    sigma0: float
    direction: Direction
    base_speed: float
    family: Optional[int] = None
    seed_condition: float = float("nan")
    points: List[ShockPoint] = field(default_factory=list)
    truncated: bool = False
    truncation_reason: str = ""

    def truncate(self, reason: str):
        """Stops the curve and records why"""
        self.truncated = True
        self.truncation_reason = reason
        logger.info(
            "%s shock curve truncated after %d points: %s",
            self.direction.value,
            len(self.points),
            reason,
        )


class _NewtonResult(NamedTuple):
    state: np.ndarray
    residual_norm: float
    iterations: int


def _solve_jump(
    Uminus: PrimitiveState, start: np.ndarray, sigma: float, p: ModelParams
) -> Tuple[_NewtonResult, float]:
    """Damped Newton on J(U, sigma) = J(U-, sigma), returns the result and the residual scale"""
    target = jump_map(Uminus, sigma, p)
    scale = 1.0 + float(np.linalg.norm(target))
    state = np.array(start, dtype=float)
    residual = jump_map(PrimitiveState.from_array(state), sigma, p) - target
    norm = float(np.linalg.norm(residual))

    iteration = 0
    while iteration < MAX_NEWTON_ITERATIONS and norm > CONVERGED_TOL * scale:
        iteration += 1
        try:
            step = np.linalg.solve(jacobian_J(PrimitiveState.from_array(state), sigma, p), -residual)
        except np.linalg.LinAlgError:
            logger.debug("singular jump Jacobian at sigma=%s", sigma)
            break
        damping = 1.0
        for _ in range(MAX_HALVINGS + 1):
            trial = state + damping * step
            if trial[0] > 0 and trial[1] > 0:
                trial_residual = jump_map(PrimitiveState.from_array(trial), sigma, p) - target
                trial_norm = float(np.linalg.norm(trial_residual))
                if trial_norm < norm:
                    state, residual, norm = trial, trial_residual, trial_norm
                    break
            damping *= 0.5
        else:
            logger.debug("Newton stalled at sigma=%s with residual %s", sigma, norm)
            break
    return _NewtonResult(state, norm, iteration), scale


def _nearest_family(Uminus: PrimitiveState, sigma0: float, p: ModelParams) -> Tuple[int, float]:
    lambdas = eigenvalues(Uminus, p).lambdas
    index = int(np.argmin([abs(lam - sigma0) for lam in lambdas]))
    return index + 1, lambdas[index]


def _first_predictor(
    Uminus: PrimitiveState, base_speed: float, sigma1: float, p: ModelParams, kick: float, sign: float
) -> np.ndarray:
    """U- + eps r_k with eps from the Hugoniot expansion sigma ~ lambda_k + (grad(lambda_k).r_k) eps / 2"""
    direction = eigenvector(base_speed, Uminus, p)
    try:
        slope = float(eigenvalue_gradient(base_speed, Uminus, p) @ direction)
    except DegenerateRoot:
        slope = 0.0
    if abs(slope) < FLAT_FIELD_TOL:
        amplitude = sign * kick
    else:
        amplitude = 2.0 * (sigma1 - base_speed) / slope
    return Uminus.as_array() + amplitude * direction


def _jump_det(state: np.ndarray, sigma: float, p: ModelParams) -> float:
    return float(np.linalg.det(jacobian_J(PrimitiveState.from_array(state), sigma, p)))


def _locate_fold(
    Uminus: PrimitiveState,
    sigmas: List[float],
    history: List[np.ndarray],
    sigma_failed: float,
    p: ModelParams,
) -> Optional[float]:
    """Bisects between the last accepted speed and the failed one.

    Each trial starts from the secant through the last two solutions and is
    kept only when it stays close to that prediction. The locus turns back
    when det D_U J changes sign or shrinks below FOLD_DET_RATIO of its value
    at the last accepted point; returns the closest accepted speed then.
    """
    sigma_a, state = sigmas[-1], history[-1]
    sigma_prev, previous = sigmas[-2], history[-2]
    sigma_b = sigma_failed
    det_start = _jump_det(state, sigma_a, p)
    for _ in range(FOLD_BISECTIONS):
        middle = 0.5 * (sigma_a + sigma_b)
        predicted = state + (middle - sigma_a) / (sigma_a - sigma_prev) * (state - previous)
        if not (predicted[0] > 0 and predicted[1] > 0):
            predicted = state
        result, scale = _solve_jump(Uminus, predicted, middle, p)
        reach = 4.0 * float(np.linalg.norm(predicted - state)) + ACCEPT_TOL
        if (
            result.residual_norm <= ACCEPT_TOL * scale
            and float(np.linalg.norm(result.state - predicted)) <= reach
        ):
            sigma_prev, previous = sigma_a, state
            sigma_a, state = middle, result.state
        else:
            sigma_b = middle
    det_end = _jump_det(state, sigma_a, p)
    logger.debug("det D_U J went from %s to %s approaching sigma=%s", det_start, det_end, sigma_a)
    if det_start == 0.0 or det_end / det_start < FOLD_DET_RATIO:
        return sigma_a
    return None


def trace_shock_curve(
    Uminus: PrimitiveState,
    sigma0: float,
    sigma_span: float,
    n_steps: int,
    p: ModelParams,
    direction: Direction = Direction.INCREASING,
    kick: float = DEFAULT_KICK,
) -> ShockCurve:
    """Continues the Hugoniot locus of Uminus in sigma.

    With a positive kick the base speed is moved to the eigenvalue of
    Uminus nearest sigma0, where the shock branch crosses the trivial
    branch U+ = U-, and the first Newton start is placed on the shock
    branch. Later starts extrapolate the last two points. A zero kick keeps
    sigma0 and follows the trivial branch.

    Args:
        Uminus (PrimitiveState): left state
        sigma0 (float): requested seed speed
        sigma_span (float): total change of sigma along the curve
        n_steps (int): number of continuation steps
        p (ModelParams): model parameters
        direction (Direction): increasing or decreasing sigma
        kick (float): amplitude fallback along r_k for flat fields, 0 disables branch switching

    Raises:
        SeedJacobianSingular: kick is 0 and D_U J at (Uminus, sigma0) is singular
        ValueError: n_steps < 1

    Returns:
        ShockCurve: accepted points, truncated at the first failed solve
    """
    if n_steps < 1:
        raise ValueError(f"n_steps must be at least 1, got {n_steps}")

    condition = float(np.linalg.cond(jacobian_J(Uminus, sigma0, p)))
    if kick > 0:
        family, base_speed = _nearest_family(Uminus, sigma0, p)
        if base_speed != sigma0:
            logger.info("seed speed %s moved to lambda_%d(U-) = %s", sigma0, family, base_speed)
    else:
        if not condition < SINGULAR_CONDITION:
            raise SeedJacobianSingular(
                f"D_U J is singular at the seed (condition number {condition:.3e})", condition
            )
        family, base_speed = None, sigma0

    curve = ShockCurve(
        U_minus=Uminus,
        sigma0=sigma0,
        direction=direction,
        base_speed=base_speed,
        family=family,
        seed_condition=condition,
    )
    curve.points.append(ShockPoint(base_speed, Uminus, 0.0, 0.0))

    sign = direction.sign
    increment = sign * sigma_span / n_steps
    left = Uminus.as_array()
    history = [left]
    sigmas = [base_speed]
    for step in range(1, n_steps + 1):
        sigma = base_speed + step * increment
        if step == 1:
            start = _first_predictor(Uminus, base_speed, sigma, p, kick, sign) if kick > 0 else left
        else:
            start = 2.0 * history[-1] - history[-2]
        if not (start[0] > 0 and start[1] > 0):
            start = history[-1]

        result, scale = _solve_jump(Uminus, start, sigma, p)
        if result.residual_norm > ACCEPT_TOL * scale:
            fold = _locate_fold(Uminus, sigmas, history, sigma, p) if len(history) > 1 else None
            if fold is not None:
                curve.truncate(f"fold near sigma={fold!r}, the locus turns back before sigma={sigma!r}")
            else:
                curve.truncate(f"Newton failed at sigma={sigma!r} (residual {result.residual_norm:.3e})")
            break
        if min(result.state[0], result.state[1]) <= DENSITY_FLOOR:
            curve.truncate(f"density below {DENSITY_FLOOR} at sigma={sigma!r}")
            break
        distance = float(np.linalg.norm(result.state - left))
        if kick > 0 and distance <= 1e-3 * float(np.linalg.norm(start - left)):
            curve.truncate(f"collapsed onto the trivial branch at sigma={sigma!r}")
            break

        U_plus = PrimitiveState.from_array(result.state)
        curve.points.append(
            ShockPoint(
                sigma=sigma,
                U_plus=U_plus,
                residual_norm=result.residual_norm,
                dissipation=shock_entropy_dissipation(Uminus, U_plus, sigma, p),
            )
        )
        history.append(result.state)
        sigmas.append(sigma)
        logger.debug("sigma=%s U+=%s after %d Newton steps", sigma, result.state, result.iterations)

    return curve


def trace_both_halves(
    Uminus: PrimitiveState,
    sigma0: float,
    sigma_span: float,
    n_steps: int,
    p: ModelParams,
    kick: float = DEFAULT_KICK,
) -> Tuple[ShockCurve, ShockCurve]:
    """Increasing and decreasing halves of the curve through the same base speed"""
    return (
        trace_shock_curve(Uminus, sigma0, sigma_span, n_steps, p, Direction.INCREASING, kick),
        trace_shock_curve(Uminus, sigma0, sigma_span, n_steps, p, Direction.DECREASING, kick),
    )


class ShockClassification(NamedTuple):
    """Lax family of a shock and its entropy admissibility"""

    family: Optional[int]
    lax_ok: bool
    dissipation_ok: bool


def classify_shock(point: ShockPoint, Uminus: PrimitiveState, p: ModelParams) -> ShockClassification:
    """Finds the unique k with lambda_k(U+) <= sigma <= lambda_k(U-) and checks D >= 0"""
    left = eigenvalues(Uminus, p).lambdas
    right = eigenvalues(point.U_plus, p).lambdas
    families = [
        index + 1
        for index, (lam_minus, lam_plus) in enumerate(zip(left, right))
        if lam_plus - LAX_SLACK <= point.sigma <= lam_minus + LAX_SLACK
    ]
    family = families[0] if len(families) == 1 else None
    scale = 1.0 + max(abs(value) for value in point.U_plus.astuple() + Uminus.astuple()) ** 3
    dissipation = shock_entropy_dissipation(Uminus, point.U_plus, point.sigma, p)
    return ShockClassification(
        family=family,
        lax_ok=family is not None,
        dissipation_ok=dissipation >= -1e-12 * scale,
    )


def dissipation_scaling_exponent(curve: ShockCurve) -> float:
    """Slope of log|D| against log|U+ - U-| over the nontrivial points"""
    left = curve.U_minus.as_array()
    amplitudes, dissipations = [], []
    for point in curve.points[1:]:
        amplitude = float(np.linalg.norm(point.U_plus.as_array() - left))
        if amplitude > 0 and point.dissipation != 0:
            amplitudes.append(amplitude)
            dissipations.append(abs(point.dissipation))
    if len(amplitudes) < 2:
        raise ValueError("need at least two nontrivial points to fit the dissipation exponent")
    slope, _ = np.polyfit(np.log(amplitudes), np.log(dissipations), 1)
    return float(slope)
