"""BOSE GAS EQUATION OF STATE MODULE

Polylogarithm series for the bosonian moments F0 and F2, the entropy S(beta)
of the isentropic closure, the isentropic constant c_tilde_N and quadrature
oracles over the bosonian equilibrium distribution.
"""
# pylint: disable=invalid-name,import-error
import logging
import math
from dataclasses import dataclass
from typing import Callable, Tuple

import numpy as np
from scipy import integrate, special

from api_utilities.exceptions import InvalidFugacity, QuadratureNotConverged
from state_model import ModelParams

logger = logging.getLogger(__name__)

SERIES_TOL = 1e-14
MAX_SERIES_TERMS = 1_000_000
SERIES_CHUNK = 65_536
QUADRATURE_TOL = 1e-10
DEFAULT_DIMENSION = 3


def check_beta(beta: float) -> float:
    """Validates a fugacity: 0 < beta < 1 strictly"""
    if not 0.0 < beta < 1.0:
        raise InvalidFugacity(f"fugacity must lie in (0, 1), got {beta!r}")
    return float(beta)


def polylog(s: float, beta: float, tol: float = SERIES_TOL) -> float:
    """Li_s(beta) = sum_{k>=1} beta^k / k^s by direct summation

    Terms are summed in chunks until the next term drops below tol times the
    running sum. Close to beta = 1 the series is capped at 1e6 terms and the
    geometric tail estimate term * beta / (1 - beta) is added.

    Args:
        s (float): order, s >= 0
        beta (float): fugacity in (0, 1)
        tol (float): relative truncation tolerance

    Returns:
        float: Li_s(beta)
    """
    beta = check_beta(beta)
    log_beta = math.log(beta)
    total = 0.0
    start = 1
    last_term = 0.0
    while start <= MAX_SERIES_TERMS:
        stop = min(start + SERIES_CHUNK, MAX_SERIES_TERMS + 1)
        k = np.arange(start, stop, dtype=float)
        terms = np.exp(k * log_beta - s * np.log(k))
        partial = total + np.cumsum(terms)
        small = terms[1:] < tol * partial[:-1]
        if np.any(small):
            cut = int(np.argmax(small))
            logger.debug("Li_%s(%s) truncated after %d terms", s, beta, start + cut)
            return float(partial[cut])
        total = float(partial[-1])
        last_term = float(terms[-1])
        start = stop

    tail = last_term * beta / (1.0 - beta)
    logger.debug("Li_%s(%s) capped at %d terms, tail estimate %s", s, beta, MAX_SERIES_TERMS, tail)
    return total + tail


def _gauss_factor(N: int) -> float:
    return (2.0 * math.pi) ** (N / 2.0)


def F0(beta: float, N: int = DEFAULT_DIMENSION, tol: float = SERIES_TOL) -> float:
    """F0 = (2 pi)^{N/2} Li_{N/2}(beta), density of the bosonian at T = 1"""
    return _gauss_factor(N) * polylog(N / 2.0, beta, tol)


def F2(beta: float, N: int = DEFAULT_DIMENSION, tol: float = SERIES_TOL) -> float:
    """F2 = N (2 pi)^{N/2} Li_{N/2+1}(beta), second moment of the bosonian at T = 1"""
    return N * _gauss_factor(N) * polylog(N / 2.0 + 1.0, beta, tol)


def F0_prime(beta: float, N: int = DEFAULT_DIMENSION, tol: float = SERIES_TOL) -> float:
    """dF0/dbeta using Li_s'(beta) = Li_{s-1}(beta) / beta"""
    return _gauss_factor(N) * polylog(N / 2.0 - 1.0, beta, tol) / beta


def F2_prime(beta: float, N: int = DEFAULT_DIMENSION, tol: float = SERIES_TOL) -> float:
    """dF2/dbeta using Li_s'(beta) = Li_{s-1}(beta) / beta"""
    return N * _gauss_factor(N) * polylog(N / 2.0, beta, tol) / beta


def entropy_S(beta: float, N: int = DEFAULT_DIMENSION, tol: float = SERIES_TOL) -> float:
    """S(beta) = (1/2 + 1/N) F2 / F0 - log(beta)"""
    return (0.5 + 1.0 / N) * F2(beta, N, tol) / F0(beta, N, tol) - math.log(beta)


def entropy_S_prime(beta: float, N: int = DEFAULT_DIMENSION, tol: float = SERIES_TOL) -> float:
    """S'(beta) = (1/2 + 1/N)(F2' F0 - F2 F0') / F0^2 - 1/beta, negative on (0, 1)"""
    f0 = F0(beta, N, tol)
    f2 = F2(beta, N, tol)
    ratio_prime = (F2_prime(beta, N, tol) * f0 - f2 * F0_prime(beta, N, tol)) / f0**2
    return (0.5 + 1.0 / N) * ratio_prime - 1.0 / beta


def series_coefficients(n_max: int, N: int = DEFAULT_DIMENSION) -> Tuple[np.ndarray, np.ndarray]:
    """Coefficients c_n and c_tilde_n, n = 0..n_max, of the monotonicity argument

    c_n       = sum_k 1 / ((k+1)^{N/2}   (n-k+1)^{N/2})
    c_tilde_n = sum_k 1 / ((k+1)^{N/2+1} (n-k+1)^{N/2-1})
    """
    half = N / 2.0
    c_n = np.empty(n_max + 1)
    c_tilde_n = np.empty(n_max + 1)
    for n in range(n_max + 1):
        left = np.arange(1, n + 2, dtype=float)
        right = left[::-1]
        c_n[n] = np.sum(1.0 / (left**half * right**half))
        c_tilde_n[n] = np.sum(1.0 / (left ** (half + 1.0) * right ** (half - 1.0)))
    return c_n, c_tilde_n


def c_tilde_from_beta0(beta0: float, N: int = DEFAULT_DIMENSION, tol: float = SERIES_TOL) -> float:
    """c_tilde_N = (1/N) F2(beta0) / F0(beta0)^{1 + 2/N}"""
    return F2(beta0, N, tol) / (N * F0(beta0, N, tol) ** (1.0 + 2.0 / N))


def sphere_area(N: int) -> float:
    """Surface area of the unit sphere S^{N-1}"""
    return 2.0 * math.pi ** (N / 2.0) / special.gamma(N / 2.0)


def _radial_quadrature(
    radial: Callable[[float], float], T: float, N: int, tol: float
) -> float:
    """Integrates an isotropic integrand over R^N as area * int_0^R f(r) r^{N-1} dr"""
    cutoff = math.sqrt(160.0 * T)
    value, abserr = integrate.quad(
        lambda r: radial(r) * r ** (N - 1), 0.0, cutoff, epsabs=tol, epsrel=tol, limit=200
    )
    if not abserr <= tol * max(1.0, abs(value)):
        raise QuadratureNotConverged(
            f"radial quadrature error estimate {abserr} above tolerance {tol}"
        )
    return sphere_area(N) * value


def bosonian_moment(
    order: int, beta: float, T: float = 1.0, N: int = DEFAULT_DIMENSION, tol: float = QUADRATURE_TOL
) -> float:
    """int |v|^order beta e^{-|v|^2/2T} / (1 - beta e^{-|v|^2/2T}) dv over R^N

    Order 0 equals T^{N/2} F0(beta) and order 2 equals T^{N/2+1} F2(beta).

    Raises:
        QuadratureNotConverged: error estimate above tol
    """
    if order not in (0, 2):
        raise ValueError(f"order must be 0 or 2, got {order}")
    beta = check_beta(beta)
    if not T > 0:
        raise ValueError(f"temperature must be positive, got {T}")

    def occupation(r: float) -> float:
        weight = beta * math.exp(-(r**2) / (2.0 * T))
        return r**order * weight / (1.0 - weight)

    return _radial_quadrature(occupation, T, N, tol)


def log_moment(
    beta: float, T: float = 1.0, N: int = DEFAULT_DIMENSION, tol: float = QUADRATURE_TOL
) -> float:
    """int log(1 - beta e^{-|v|^2/2T}) dv over R^N; at T = 1 it equals -F2 / N"""
    beta = check_beta(beta)
    return _radial_quadrature(
        lambda r: math.log1p(-beta * math.exp(-(r**2) / (2.0 * T))), T, N, tol
    )


def entropy_from_quadrature(
    beta: float, N: int = DEFAULT_DIMENSION, T: float = 1.0, tol: float = QUADRATURE_TOL
) -> float:
    """S from rho_n S = -int (M/(1-M) log M + log(1-M)) dv with M = beta e^{-|v|^2/2T}"""
    beta = check_beta(beta)
    log_beta = math.log(beta)

    def integrand(r: float) -> float:
        weight = beta * math.exp(-(r**2) / (2.0 * T))
        log_weight = log_beta - r**2 / (2.0 * T)
        return weight / (1.0 - weight) * log_weight + math.log1p(-weight)

    density = bosonian_moment(0, beta, T, N, tol)
    return -_radial_quadrature(integrand, T, N, tol) / density


@dataclass(frozen=True)
class EosTable:
    """Reference fugacity beta0 and the isentropic constant it determines"""

    dimension: int
    beta0: float
    c_tilde_N: float
    series_tol: float = SERIES_TOL

    @classmethod
    def from_beta0(
        cls, beta0: float, N: int = DEFAULT_DIMENSION, series_tol: float = SERIES_TOL
    ) -> "EosTable":
        """Builds the table, computing c_tilde_N with the module's own F0, F2"""
        beta0 = check_beta(beta0)
        if N < 1:
            raise ValueError(f"dimension must be a positive integer, got {N}")
        return cls(N, beta0, c_tilde_from_beta0(beta0, N, series_tol), series_tol)

    def density(self, T: float) -> float:
        """rho_n = T^{N/2} F0(beta0)"""
        return T ** (self.dimension / 2.0) * F0(self.beta0, self.dimension, self.series_tol)

    def pressure(self, T: float) -> float:
        """p = (1/N) T^{N/2+1} F2(beta0)"""
        return (
            T ** (self.dimension / 2.0 + 1.0)
            * F2(self.beta0, self.dimension, self.series_tol)
            / self.dimension
        )

    def to_model_params(self, alpha: float) -> ModelParams:
        """Model parameters of the three dimensional isentropic closure"""
        if self.dimension != 3:
            raise ValueError("the two-fluid system uses the N = 3 pressure law p = c_tilde rho_n^{5/3}")
        return ModelParams(alpha=alpha, c_tilde=self.c_tilde_N)
