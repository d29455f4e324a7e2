"""ENTROPY PAIR MODULE

The physical energy E is a convex entropy of the two-fluid system with
entropy flux G. Convexity holds where u_s^2 < (alpha/2) rho_s and P_A(0) > 0.
"""
# pylint: disable=invalid-name,import-error
import logging
from dataclasses import dataclass
from typing import NamedTuple, Optional, Union

import numpy as np

from hyperbolicity import char_poly, check_conditions
from state_model import ModelParams, PrimitiveState, Real

logger = logging.getLogger(__name__)

DISSIPATION_SLACK = 1e-12


def entropy_E(U: PrimitiveState, p: ModelParams) -> Real:
    """E = rho_n u_n^2/2 + rho_s u_s^2/2 + (9/10) c rho_n^{5/3} + alpha (rho_n + rho_s/2)^2"""
    return (
        0.5 * U.rho_n * U.u_n**2
        + 0.5 * U.rho_s * U.u_s**2
        + 0.9 * p.c * np.power(U.rho_n, 5.0 / 3.0)
        + p.alpha * (U.rho_n + 0.5 * U.rho_s) ** 2
    )


def entropy_G(U: PrimitiveState, p: ModelParams) -> Real:
    """G = rho_n u_n^3/2 + rho_s u_s^3/2 + (3/2) c rho_n^{5/3} u_n + alpha (rho_n + rho_s/2)(2 rho_n u_n + rho_s u_s)"""
    return (
        0.5 * U.rho_n * U.u_n**3
        + 0.5 * U.rho_s * U.u_s**3
        + 1.5 * p.c * np.power(U.rho_n, 5.0 / 3.0) * U.u_n
        + p.alpha * (U.rho_n + 0.5 * U.rho_s) * (2.0 * U.rho_n * U.u_n + U.rho_s * U.u_s)
    )


def hessian_E(U: PrimitiveState, p: ModelParams) -> np.ndarray:
    """Hessian of E in (rho_n, rho_s, u_n, u_s)"""
    rho_n, rho_s, u_n, u_s = (float(value) for value in U.astuple())
    return np.array(
        [
            [p.c * rho_n ** (-1.0 / 3.0) + 2.0 * p.alpha, p.alpha, u_n, 0.0],
            [p.alpha, 0.5 * p.alpha, 0.0, u_s],
            [u_n, 0.0, rho_n, 0.0],
            [0.0, u_s, 0.0, rho_s],
        ]
    )


def hessian_quadratic_form(U: PrimitiveState, X: np.ndarray, p: ModelParams) -> float:
    """X^T Hess(E) X"""
    X = np.asarray(X, dtype=float)
    return float(X @ hessian_E(U, p) @ X)


def completed_square_form(U: PrimitiveState, X: np.ndarray, p: ModelParams) -> float:
    """X^T Hess(E) X written as a sum of weighted squares

    Raises:
        ValueError: alpha rho_s = 2 u_s^2, where the x_2 square cannot be completed
    """
    rho_n, rho_s, u_n, u_s = (float(value) for value in U.astuple())
    x1, x2, x3, x4 = (float(value) for value in X)
    pivot = p.alpha * rho_s - 2.0 * u_s**2
    if pivot == 0:
        raise ValueError("alpha rho_s - 2 u_s^2 vanishes, the square in x_2 is undefined")
    return (
        rho_s * (x4 + u_s / rho_s * x2) ** 2
        + rho_n * (x3 + u_n / rho_n * x1) ** 2
        + (0.5 * p.alpha - u_s**2 / rho_s) * (x2 + 2.0 * p.alpha * rho_s / pivot * x1) ** 2
        + (
            p.c * rho_n ** (-1.0 / 3.0)
            + 2.0 * p.alpha
            - u_n**2 / rho_n
            - 2.0 * p.alpha**2 * rho_s / pivot
        )
        * x1**2
    )


class ConvexityConditions(NamedTuple):
    """Conditions making Hess(E) positive definite"""

    us_small: Union[bool, np.ndarray]
    pa0_positive: Union[bool, np.ndarray]

    @property
    def convex(self) -> Union[bool, np.ndarray]:
        """Both conditions hold, cell-wise for array states"""
        return self.us_small & self.pa0_positive


def convexity_conditions(U: PrimitiveState, p: ModelParams) -> ConvexityConditions:
    """u_s^2 < (alpha/2) rho_s and P_A(0) > 0"""
    us_small = np.asarray(U.u_s**2 < 0.5 * p.alpha * U.rho_s)
    pa0_positive = np.asarray(char_poly(U, p)(0.0) > 0)
    if us_small.ndim == 0:
        return ConvexityConditions(bool(us_small), bool(pa0_positive))
    return ConvexityConditions(us_small, pa0_positive)


@dataclass(frozen=True)
class EntropyReport:
    """Entropy, entropy flux and convexity diagnostics at one state"""

    E: float
    G: float
    hessian_conditions: ConvexityConditions
    min_quadratic_form: float


def entropy_report(
    U: PrimitiveState, p: ModelParams, n_probes: int = 1000, seed: Optional[int] = 0
) -> EntropyReport:
    """Evaluates E, G and the smallest Hessian quadratic form over random unit directions"""
    rng = np.random.default_rng(seed)
    directions = rng.normal(size=(n_probes, 4))
    directions /= np.linalg.norm(directions, axis=1, keepdims=True)
    forms = np.einsum("ij,jk,ik->i", directions, hessian_E(U, p), directions)
    return EntropyReport(
        E=float(entropy_E(U, p)),
        G=float(entropy_G(U, p)),
        hessian_conditions=convexity_conditions(U, p),
        min_quadratic_form=float(np.min(forms)),
    )


def in_admissible_set(U: PrimitiveState, p: ModelParams) -> bool:
    """Membership in the set where smooth solutions exist: hyperbolic, convex and u_n != u_s"""
    if not (U.rho_n > 0 and U.rho_s > 0):
        return False
    return bool(
        check_conditions(U, p).any
        and convexity_conditions(U, p).convex
        and U.u_n != U.u_s
    )


def shock_entropy_dissipation(
    Uminus: PrimitiveState, Uplus: PrimitiveState, sigma: float, p: ModelParams
) -> float:
    """D = sigma [E] - [G]; D >= 0 is the entropy inequality across a shock of speed sigma"""
    jump_E = entropy_E(Uplus, p) - entropy_E(Uminus, p)
    jump_G = entropy_G(Uplus, p) - entropy_G(Uminus, p)
    return float(sigma * jump_E - jump_G)
