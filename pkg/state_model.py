"""STATE MODEL MODULE

Primitive and conserved states of the one dimensional two-fluid system,
the conserved map F, its inverse on the branch sets and the x-flux H.
Every field may hold a float or a numpy array so the same formulas serve
single states and whole grids of cells.
"""
# pylint: disable=invalid-name,import-error
import logging
from dataclasses import dataclass
from enum import Enum
from typing import NamedTuple, Union

import numpy as np

from api_utilities.exceptions import NegativeDiscriminant, NonpositiveDensity

logger = logging.getLogger(__name__)

Real = Union[float, np.ndarray]

DENSITY_FLOOR = 1e-14
DISCRIMINANT_TOL = 1e-12


@dataclass(frozen=True)
class ModelParams:
    """Interaction strength alpha and isentropic constant c_tilde (p = c_tilde rho_n^{5/3})"""

    alpha: float
    c_tilde: float

    def __post_init__(self):
        if not self.alpha > 0:
            raise ValueError(f"alpha must be positive, got {self.alpha}")
        if not self.c_tilde > 0:
            raise ValueError(f"c_tilde must be positive, got {self.c_tilde}")

    @property
    def c(self) -> float:
        """c = (5/3) c_tilde, the constant of the quasilinear matrix A"""
        return 5.0 / 3.0 * self.c_tilde


@dataclass(frozen=True)
class PrimitiveState:
    """Unknowns (rho_n, rho_s, u_n, u_s) of the two-fluid system"""

    rho_n: Real
    rho_s: Real
    u_n: Real
    u_s: Real

    def as_array(self) -> np.ndarray:
        """Stacks the fields into a (4,) or (4, n) array"""
        return np.stack([np.asarray(field, dtype=float) for field in self.astuple()])

    def astuple(self):
        """Fields in canonical order"""
        return (self.rho_n, self.rho_s, self.u_n, self.u_s)

    @classmethod
    def from_array(cls, values: np.ndarray) -> "PrimitiveState":
        """Builds a state from the first axis of a (4,) or (4, n) array"""
        values = np.asarray(values, dtype=float)
        if values.shape[0] != 4:
            raise ValueError(f"expected 4 components on the first axis, got {values.shape}")
        if values.ndim == 1:
            return cls(*(float(value) for value in values))
        return cls(values[0], values[1], values[2], values[3])


@dataclass(frozen=True)
class ConservedState:
    """Unknowns (rho_n, rho_s, m, e) of the conservative form"""

    rho_n: Real
    rho_s: Real
    m: Real
    e: Real

    def as_array(self) -> np.ndarray:
        """Stacks the fields into a (4,) or (4, n) array"""
        return np.stack([np.asarray(field, dtype=float) for field in self.astuple()])

    def astuple(self):
        """Fields in canonical order"""
        return (self.rho_n, self.rho_s, self.m, self.e)

    @classmethod
    def from_array(cls, values: np.ndarray) -> "ConservedState":
        """Builds a state from the first axis of a (4,) or (4, n) array"""
        values = np.asarray(values, dtype=float)
        if values.shape[0] != 4:
            raise ValueError(f"expected 4 components on the first axis, got {values.shape}")
        if values.ndim == 1:
            return cls(*(float(value) for value in values))
        return cls(values[0], values[1], values[2], values[3])


class Branch(Enum):
    """Set O+ (u_n > u_s) or O- (u_n < u_s) on which F is inverted"""

    NORMAL_FASTER = 1
    SUPER_FASTER = -1

    @classmethod
    def of(cls, U: PrimitiveState) -> "Branch":
        """Branch containing U, ties go to NORMAL_FASTER"""
        return cls.SUPER_FASTER if U.u_n < U.u_s else cls.NORMAL_FASTER

    @classmethod
    def signs(cls, U: PrimitiveState) -> np.ndarray:
        """Cell-wise branch signs (+1 / -1) of an array valued state"""
        return np.where(np.asarray(U.u_n) < np.asarray(U.u_s), -1.0, 1.0)


class JacobianF(NamedTuple):
    """Jacobian matrix of F with respect to (rho_n, rho_s, u_n, u_s) and its determinant"""

    matrix: np.ndarray
    determinant: float


def potential_energy(rho_n: Real, rho_s: Real, p: ModelParams) -> Real:
    """Velocity independent part of the energy: (3/2) c_tilde rho_n^{5/3} + alpha (rho_n + rho_s/2)^2"""
    return 1.5 * p.c_tilde * np.power(rho_n, 5.0 / 3.0) + p.alpha * (rho_n + 0.5 * rho_s) ** 2


def pressure(U: PrimitiveState, p: ModelParams) -> Real:
    """Normal fluid pressure under the isentropic closure"""
    return p.c_tilde * np.power(U.rho_n, 5.0 / 3.0)


def to_conserved(U: PrimitiveState, p: ModelParams) -> ConservedState:
    """Conserved map F"""
    m = U.rho_n * U.u_n + U.rho_s * U.u_s
    e = (
        0.5 * U.rho_n * U.u_n**2
        + 0.5 * U.rho_s * U.u_s**2
        + potential_energy(U.rho_n, U.rho_s, p)
    )
    return ConservedState(U.rho_n, U.rho_s, m, e)


def _branch_sign(branch: Union[Branch, np.ndarray]) -> Real:
    if isinstance(branch, Branch):
        return float(branch.value)
    return np.asarray(branch, dtype=float)


def to_primitive(
    W: ConservedState, branch: Union[Branch, np.ndarray], p: ModelParams
) -> PrimitiveState:
    """Inverse of F on the branch set O+ or O-.

    With R = rho_n + rho_s and d = u_n - u_s the kinetic energy splits as
    e_kin = m^2 / (2R) + rho_n rho_s d^2 / (2R), so d is the branch-signed
    root of that quadratic.

    Args:
        W (ConservedState): conserved vector, scalar or array valued
        branch (Union[Branch, np.ndarray]): Branch or cell-wise signs +1/-1
        p (ModelParams): model parameters

    Raises:
        NonpositiveDensity: rho_n or rho_s below 1e-14
        NegativeDiscriminant: W is not in the image of F

    Returns:
        PrimitiveState: primitive state of the same shape as W
    """
    rho_n = np.asarray(W.rho_n, dtype=float)
    rho_s = np.asarray(W.rho_s, dtype=float)
    m = np.asarray(W.m, dtype=float)
    e = np.asarray(W.e, dtype=float)

    thin = (rho_n < DENSITY_FLOOR) | (rho_s < DENSITY_FLOOR)
    if np.any(thin):
        cells = np.flatnonzero(thin).tolist() if thin.ndim else []
        raise NonpositiveDensity(
            f"density below {DENSITY_FLOOR} cannot be inverted", cells=cells
        )

    total = rho_n + rho_s
    e_kin = e - potential_energy(rho_n, rho_s, p)
    bulk = m**2 / (2.0 * total)
    discriminant = e_kin - bulk
    scale = np.maximum(np.abs(e_kin), bulk)
    negative = discriminant < -DISCRIMINANT_TOL * scale
    if np.any(negative):
        cells = np.flatnonzero(negative).tolist() if negative.ndim else []
        raise NegativeDiscriminant(
            "conserved vector outside the image of F (kinetic residual below m^2/2R)",
            cells=cells,
        )
    discriminant = np.maximum(discriminant, 0.0)

    d = _branch_sign(branch) * np.sqrt(2.0 * total * discriminant / (rho_n * rho_s))
    mean_velocity = m / total
    u_n = mean_velocity + rho_s * d / total
    u_s = mean_velocity - rho_n * d / total

    if np.ndim(u_n) == 0:
        return PrimitiveState(float(rho_n), float(rho_s), float(u_n), float(u_s))
    return PrimitiveState(rho_n, rho_s, u_n, u_s)


def flux(U: PrimitiveState, p: ModelParams) -> ConservedState:
    """x-flux H of the conservative form"""
    pressure_n = p.c_tilde * np.power(U.rho_n, 5.0 / 3.0)
    mixture = U.rho_n + 0.5 * U.rho_s
    mass_n = U.rho_n * U.u_n
    mass_s = U.rho_s * U.u_s
    momentum = (
        mass_n * U.u_n
        + mass_s * U.u_s
        + pressure_n
        + 0.25 * p.alpha * (2.0 * U.rho_n + U.rho_s) ** 2
    )
    energy = (
        0.5 * mass_n * U.u_n**2
        + 0.5 * mass_s * U.u_s**2
        + 2.5 * pressure_n * U.u_n
        + p.alpha * mixture * (2.0 * mass_n + mass_s)
    )
    return ConservedState(mass_n, mass_s, momentum, energy)


def jacobian_F(U: PrimitiveState, p: ModelParams) -> JacobianF:
    """Jacobian of F in (rho_n, rho_s, u_n, u_s); its determinant is rho_n rho_s (u_s - u_n)"""
    rho_n, rho_s, u_n, u_s = (float(value) for value in U.astuple())
    mixture = rho_n + 0.5 * rho_s
    matrix = np.array(
        [
            [1.0, 0.0, 0.0, 0.0],
            [0.0, 1.0, 0.0, 0.0],
            [u_n, u_s, rho_n, rho_s],
            [
                0.5 * u_n**2 + 2.5 * p.c_tilde * rho_n ** (2.0 / 3.0) + 2.0 * p.alpha * mixture,
                0.5 * u_s**2 + p.alpha * mixture,
                rho_n * u_n,
                rho_s * u_s,
            ],
        ]
    )
    return JacobianF(matrix=matrix, determinant=float(np.linalg.det(matrix)))
