"""
api_utilities.exceptions
~~~~~~~~~~~~~~~~~~~~~~~~
Exceptions used across the two-fluid modules.
"""
from typing import Optional, Sequence


class TwoFluidException(Exception):
    """A base class for the two-fluid toolkit exceptions."""


class NonpositiveDensity(TwoFluidException):
    """Exception Raised When a density is too small to invert the conserved map
    Args:
        cells (Sequence[int]): offending cell indices, empty for scalar states
    """

    def __init__(self, message: str, cells: Optional[Sequence[int]] = None):
        super().__init__(message)
        self.cells = list(cells or [])


class NegativeDiscriminant(TwoFluidException):
    """Exception Raised When a conserved vector lies outside the image of F
    Args:
        cells (Sequence[int]): offending cell indices, empty for scalar states
    """

    def __init__(self, message: str, cells: Optional[Sequence[int]] = None):
        super().__init__(message)
        self.cells = list(cells or [])


class NotAnEigenvalue(TwoFluidException):
    """Exception Raised When an eigenvector is requested for a non root of P_A"""


class DegenerateRoot(TwoFluidException):
    """Exception Raised When P_A' vanishes at the requested root"""


class QuadratureNotConverged(TwoFluidException):
    """Exception Raised When the adaptive quadrature misses its tolerance"""


class SeedJacobianSingular(TwoFluidException):
    """Exception Raised When the jump map Jacobian is singular at the seed
    Args:
        condition (float): condition number of D_U J at the seed
    """

    def __init__(self, message: str, condition: float):
        super().__init__(message)
        self.condition = condition


class CflViolation(TwoFluidException):
    """Exception Raised When dt * max|lambda| / dx exceeds one under the cfl policy"""

    def __init__(self, message: str, courant: float):
        super().__init__(message)
        self.courant = courant


class ConversionFailure(TwoFluidException):
    """Exception Raised When primitive recovery fails during a run
    Args:
        cell (int): first offending cell index
        time (float): simulation time of the failing step
    """

    def __init__(self, message: str, cell: int, time: float):
        super().__init__(f"{message} (cell={cell}, t={time!r})")
        self.cell = cell
        self.time = time


class NotHyperbolic(TwoFluidException):
    """Exception Raised When initial data satisfy none of the hyperbolicity conditions"""


class InvalidFugacity(TwoFluidException, ValueError):
    """Exception Raised When beta is outside the open interval (0, 1)"""


class ConfigError(TwoFluidException, ValueError):
    """Exception Raised When an experiment config has unknown or missing keys"""
