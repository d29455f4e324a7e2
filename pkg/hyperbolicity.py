"""HYPERBOLICITY MODULE

Characteristic polynomial of the quasilinear matrix A, the sufficient
hyperbolicity conditions, a sign-change certified eigenvalue solver with a
companion matrix fallback, eigenvectors and genuine nonlinearity of the
characteristic fields. The batched helpers at the bottom serve the finite
volume solver, which needs wave speeds for every cell at every step.
"""
# pylint: disable=invalid-name,import-error
import logging
from dataclasses import dataclass
from typing import NamedTuple, Tuple, Union

import numpy as np
from scipy import optimize

from api_utilities.exceptions import DegenerateRoot, NotAnEigenvalue
from state_model import ModelParams, PrimitiveState, Real

logger = logging.getLogger(__name__)

ROOT_XTOL = 1e-13
EIGENVALUE_TOL = 1e-8
DEGENERACY_TOL = 1e-12
BISECTION_STEPS = 60


@dataclass(frozen=True)
class CharPoly:
    """P(l) = ((l - u_n)^2 - a_n)((l - u_s)^2 - a_s) - coupling"""

    u_n: Real
    u_s: Real
    a_n: Real
    a_s: Real
    coupling: Real

    def factors(self, lam: Real) -> Tuple[Real, Real]:
        """Normal and superfluid factors (p, q) of the product"""
        return (lam - self.u_n) ** 2 - self.a_n, (lam - self.u_s) ** 2 - self.a_s

    def __call__(self, lam: Real) -> Real:
        p, q = self.factors(lam)
        return p * q - self.coupling

    def derivative(self, lam: Real) -> Real:
        """P'(l) = 2 (l - u_n) q + 2 (l - u_s) p"""
        p, q = self.factors(lam)
        return 2.0 * (lam - self.u_n) * q + 2.0 * (lam - self.u_s) * p

    def coefficients(self) -> np.ndarray:
        """Expanded quartic, highest degree first"""
        normal = [1.0, -2.0 * self.u_n, self.u_n**2 - self.a_n]
        superfluid = [1.0, -2.0 * self.u_s, self.u_s**2 - self.a_s]
        quartic = np.polymul(normal, superfluid)
        quartic[-1] -= self.coupling
        return quartic

    @property
    def reach(self) -> Real:
        """Half width of an interval around the mean velocity holding every real root"""
        return (
            np.abs(self.u_n - self.u_s)
            + np.sqrt(self.a_n)
            + np.sqrt(self.a_s)
            + self.coupling**0.25
            + 1.0
        )


def char_poly(U: PrimitiveState, p: ModelParams) -> CharPoly:
    """Characteristic polynomial of A(U)"""
    a_n = p.c * np.power(U.rho_n, 2.0 / 3.0) + 2.0 * p.alpha * U.rho_n
    a_s = 0.5 * p.alpha * U.rho_s
    coupling = p.alpha**2 * U.rho_n * U.rho_s
    return CharPoly(U.u_n, U.u_s, a_n, a_s, coupling)


def matrix_A(U: PrimitiveState, p: ModelParams) -> np.ndarray:
    """Quasilinear matrix of the system in the unknowns (rho_n, rho_s, u_n, u_s)"""
    rho_n, rho_s, u_n, u_s = (float(value) for value in U.astuple())
    return np.array(
        [
            [u_n, 0.0, rho_n, 0.0],
            [0.0, u_s, 0.0, rho_s],
            [p.c * rho_n ** (-1.0 / 3.0) + 2.0 * p.alpha, p.alpha, u_n, 0.0],
            [p.alpha, 0.5 * p.alpha, 0.0, u_s],
        ]
    )


class HyperbolicityConditions(NamedTuple):
    """Literal sufficient conditions and the midpoint sign used when neither of the first two holds"""

    cond1: Union[bool, np.ndarray]
    cond2: Union[bool, np.ndarray]
    cond3: Union[bool, np.ndarray]
    midpoint_positive: Union[bool, np.ndarray]

    @property
    def any(self) -> Union[bool, np.ndarray]:
        """At least one of the three conditions holds"""
        return self.cond1 | self.cond2 | self.cond3

    @property
    def certifiable(self) -> Union[bool, np.ndarray]:
        """cond1 or cond2, or cond3 together with P((u_n + u_s)/2) > 0"""
        return self.cond1 | self.cond2 | (self.cond3 & self.midpoint_positive)


def _flag(value):
    value = np.asarray(value)
    return bool(value) if value.ndim == 0 else value


def check_conditions(U: PrimitiveState, p: ModelParams) -> HyperbolicityConditions:
    """Evaluates the three hyperbolicity conditions on scalar or array states"""
    gap = (U.u_n - U.u_s) ** 2
    pressure_term = p.c * np.power(U.rho_n, 2.0 / 3.0)
    normal_stiffness = pressure_term + 2.0 * p.alpha * U.rho_n
    poly = char_poly(U, p)
    return HyperbolicityConditions(
        cond1=_flag(gap < pressure_term),
        cond2=_flag(gap < 0.5 * p.c * p.alpha * U.rho_s * np.power(U.rho_n, 2.0 / 3.0) / normal_stiffness),
        cond3=_flag(U.rho_n <= (p.c / (2.0 * p.alpha)) ** 3),
        midpoint_positive=_flag(poly(0.5 * (U.u_n + U.u_s)) > 0),
    )


@dataclass(frozen=True)
class Spectrum:
    """Four eigenvalues sorted ascending, certified when each sits in its own sign-change bracket"""

    lambdas: Tuple[float, float, float, float]
    certified: bool
    brackets: Tuple[Tuple[float, float], ...] = ()

    @property
    def spread(self) -> float:
        """Distance between the extremal eigenvalues"""
        return self.lambdas[-1] - self.lambdas[0]

    @property
    def separation(self) -> float:
        """Smallest gap between consecutive eigenvalues"""
        return float(np.min(np.diff(self.lambdas)))


def _probe_points(poly: CharPoly) -> np.ndarray:
    middle = 0.5 * (poly.u_n + poly.u_s)
    root_n, root_s = np.sqrt(poly.a_n), np.sqrt(poly.a_s)
    points = [
        middle - poly.reach,
        poly.u_s - root_s,
        poly.u_s + root_s,
        poly.u_n - root_n,
        poly.u_n + root_n,
        poly.u_s,
        poly.u_n,
        middle,
        middle + poly.reach,
    ]
    return np.unique(np.asarray(points, dtype=float))


def _polish(poly: CharPoly, root: float, low: float, high: float) -> float:
    """One guarded Newton step after Brent's method"""
    slope = poly.derivative(root)
    if slope == 0:
        return root
    candidate = root - poly(root) / slope
    if low <= candidate <= high and abs(poly(candidate)) < abs(poly(root)):
        return float(candidate)
    return root


def companion_roots(poly: CharPoly) -> np.ndarray:
    """Complex roots of P as eigenvalues of its companion matrix, sorted by real part"""
    ascending = poly.coefficients()[::-1]
    degree = ascending.size - 1
    matrix = np.eye(degree, k=-1)
    matrix[:, -1] -= ascending[:-1] / ascending[-1]
    roots = np.linalg.eigvals(matrix)
    return roots[np.argsort(roots.real)]


def eigenvalues(U: PrimitiveState, p: ModelParams) -> Spectrum:
    """Eigenvalues of A(U).

    P is evaluated at the points where its sign is known from its factored
    form (the roots of each factor, the two velocities, their mean and two
    points beyond every real root). Four strict sign changes isolate the four
    roots, which are refined with Brent's method. Otherwise the spectrum is
    taken from the companion matrix and left uncertified.

    Args:
        U (PrimitiveState): state with positive densities
        p (ModelParams): model parameters

    Returns:
        Spectrum: sorted eigenvalues and the certificate
    """
    poly = char_poly(U, p)
    points = _probe_points(poly)
    values = poly(points)
    changes = np.flatnonzero(values[:-1] * values[1:] < 0)

    if changes.size == 4:
        brackets = tuple((float(points[i]), float(points[i + 1])) for i in changes)
        roots = []
        for low, high in brackets:
            root = optimize.brentq(poly, low, high, xtol=ROOT_XTOL, rtol=4 * np.finfo(float).eps)
            roots.append(_polish(poly, root, low, high))
        logger.debug("certified spectrum %s", roots)
        return Spectrum(tuple(roots), True, brackets)

    roots = companion_roots(poly)
    logger.warning(
        "only %d sign changes of P_A at %s, using uncertified companion roots", changes.size, U
    )
    return Spectrum(tuple(float(root) for root in np.sort(roots.real)), False, ())


class Interlacing(NamedTuple):
    """Which ordering of the eigenvalues against the factor roots holds"""

    superfluid: bool
    normal: bool
    midpoint: bool


def interlacing(spectrum: Spectrum, U: PrimitiveState, p: ModelParams) -> Interlacing:
    """Checks the orderings l1 < v - r < l2 < v < l3 < v + r < l4 for v = u_s, u_n and the midpoint split"""
    l1, l2, l3, l4 = spectrum.lambdas
    poly = char_poly(U, p)

    def around(velocity: float, radius: float) -> bool:
        return bool(l1 < velocity - radius < l2 < velocity < l3 < velocity + radius < l4)

    low, high = sorted((float(U.u_n), float(U.u_s)))
    middle = 0.5 * (low + high)
    return Interlacing(
        superfluid=around(float(U.u_s), float(np.sqrt(poly.a_s))),
        normal=around(float(U.u_n), float(np.sqrt(poly.a_n))),
        midpoint=bool(low < high and l1 < low <= l2 < middle < l3 <= high < l4),
    )


def eigenvector(lam: float, U: PrimitiveState, p: ModelParams) -> np.ndarray:
    """Right eigenvector of A(U) for the root lam, largest entry scaled to +1

    Raises:
        NotAnEigenvalue: lam is not a root of P to 1e-8 relative
    """
    poly = char_poly(U, p)
    normal, superfluid = poly.factors(lam)
    residual = normal * superfluid - poly.coupling
    if superfluid == 0 and poly.coupling > 0:
        raise NotAnEigenvalue(f"{lam} is a root of the superfluid factor, P = -{poly.coupling}")
    if abs(residual) > EIGENVALUE_TOL * (abs(normal * superfluid) + poly.coupling + 1.0):
        raise NotAnEigenvalue(f"{lam} is not a root of P_A (residual {residual})")

    vector = _raw_eigenvector(lam, U, p, superfluid)
    return vector / vector[np.argmax(np.abs(vector))]


def _raw_eigenvector(lam: float, U: PrimitiveState, p: ModelParams, superfluid: float) -> np.ndarray:
    return np.array(
        [
            superfluid,
            p.alpha * U.rho_s,
            (lam - U.u_n) * superfluid / U.rho_n,
            p.alpha * (lam - U.u_s),
        ]
    )


def _degeneracy_scale(lam: float, poly: CharPoly) -> float:
    spread = abs(lam - poly.u_n) + abs(lam - poly.u_s) + np.sqrt(poly.a_n) + np.sqrt(poly.a_s)
    return max(1.0, spread**3)


def eigenvalue_gradient(lam: float, U: PrimitiveState, p: ModelParams) -> np.ndarray:
    """Gradient of a simple root with respect to (rho_n, rho_s, u_n, u_s), by implicit differentiation of P

    Raises:
        DegenerateRoot: |P'(lam)| below 1e-12 times the local scale
    """
    poly = char_poly(U, p)
    slope = poly.derivative(lam)
    if abs(slope) < DEGENERACY_TOL * _degeneracy_scale(lam, poly):
        raise DegenerateRoot(f"P_A'({lam}) = {slope} vanishes, the root is not simple")
    normal, superfluid = poly.factors(lam)
    K = -0.5 * slope
    return np.array(
        [
            (-(2.0 / 3.0 * p.c * U.rho_n ** (-1.0 / 3.0) + 2.0 * p.alpha) * superfluid
             - p.alpha**2 * U.rho_s) / (2.0 * K),
            (-0.5 * p.alpha * normal - p.alpha**2 * U.rho_n) / (2.0 * K),
            -(lam - U.u_n) * superfluid / K,
            -(lam - U.u_s) * normal / K,
        ]
    )


class GenuineNonlinearity(NamedTuple):
    """grad(lambda).X and whether it is certainly nonzero"""

    value: float
    certified_nonzero: bool
    condition_holds: bool


def genuine_nonlinearity(lam: float, U: PrimitiveState, p: ModelParams) -> GenuineNonlinearity:
    """grad(lambda).X for the field of the root lam.

    (lam - u_n)^2 > a_n forces every term of the numerator to the same sign,
    so the field is genuinely nonlinear there; it always holds for the
    extremal roots. Elsewhere only a value clearly away from zero certifies.
    """
    gradient = eigenvalue_gradient(lam, U, p)
    normal, superfluid = char_poly(U, p).factors(lam)
    vector = _raw_eigenvector(lam, U, p, superfluid)
    value = float(gradient @ vector)
    condition_holds = bool(normal > 0)
    bound = float(np.linalg.norm(gradient) * np.linalg.norm(vector))
    certified = condition_holds or abs(value) > EIGENVALUE_TOL * bound
    return GenuineNonlinearity(value, certified, condition_holds)


def batch_max_wave_speed(U: PrimitiveState, p: ModelParams) -> np.ndarray:
    """Largest |lambda| per cell from the outer roots of P

    Beyond the outermost factor root both factors are positive and growing,
    so P is monotone there and each outer root is found by bisection on a
    bracket valid for all cells at once.
    """
    poly = char_poly(U, p)
    middle = 0.5 * (poly.u_n + poly.u_s)
    inner_high = np.maximum(poly.u_s + np.sqrt(poly.a_s), poly.u_n + np.sqrt(poly.a_n))
    inner_low = np.minimum(poly.u_s - np.sqrt(poly.a_s), poly.u_n - np.sqrt(poly.a_n))
    largest = _bisect(poly, inner_high, middle + poly.reach, increasing=True)
    smallest = _bisect(poly, middle - poly.reach, inner_low, increasing=False)
    return np.maximum(np.abs(largest), np.abs(smallest))


def _bisect(poly: CharPoly, low: np.ndarray, high: np.ndarray, increasing: bool) -> np.ndarray:
    low = np.array(low, dtype=float)
    high = np.array(high, dtype=float)
    for _ in range(BISECTION_STEPS):
        middle = 0.5 * (low + high)
        positive = poly(middle) > 0
        above = positive if increasing else ~positive
        high = np.where(above, middle, high)
        low = np.where(above, low, middle)
    return 0.5 * (low + high)


def batch_is_hyperbolic(U: PrimitiveState, p: ModelParams, tol: float = 1e-7) -> np.ndarray:
    """True where P has four real, distinct roots, from batched companion eigenvalues"""
    poly = char_poly(U, p)
    u_n = np.atleast_1d(np.asarray(poly.u_n, dtype=float))
    u_s = np.atleast_1d(np.asarray(poly.u_s, dtype=float))
    normal_c = u_n**2 - np.atleast_1d(poly.a_n)
    super_c = u_s**2 - np.atleast_1d(poly.a_s)
    ascending = np.stack(
        [
            normal_c * super_c - np.atleast_1d(poly.coupling),
            -2.0 * u_n * super_c - 2.0 * u_s * normal_c,
            super_c + 4.0 * u_n * u_s + normal_c,
            -2.0 * (u_n + u_s),
        ],
        axis=-1,
    )
    matrices = np.zeros(ascending.shape[:-1] + (4, 4))
    matrices[..., 1:, :-1] = np.eye(3)
    matrices[..., :, -1] = -ascending
    roots = np.linalg.eigvals(matrices)
    scale = 1.0 + np.max(np.abs(roots), axis=-1)
    real = np.all(np.abs(roots.imag) <= tol * scale[..., None], axis=-1)
    ordered = np.sort(roots.real, axis=-1)
    distinct = np.min(np.diff(ordered, axis=-1), axis=-1) > tol * scale
    return real & distinct
