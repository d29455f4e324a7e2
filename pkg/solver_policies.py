"""SOLVER POLICIES MODULE

Time-step and branch policies used by the finite volume solver, each picked
by name through a small factory.
"""
# pylint: disable=too-few-public-methods,import-error
import logging
from abc import ABC, abstractmethod

import numpy as np

from api_utilities.exceptions import CflViolation
from state_model import Branch, PrimitiveState

logger = logging.getLogger(__name__)

COURANT_SLACK = 1e-12


class TimeStepPolicy(ABC):
    """Interface for choosing dt and checking the resulting Courant number"""

    @abstractmethod
    def time_step(self, max_speed: float, dx: float) -> float:
        """Time step for a grid spacing dx and a largest wave speed max_speed"""
        raise NotImplementedError

    @abstractmethod
    def check(self, courant: float, t: float) -> None:
        """Reacts to dt * max|lambda| / dx above one"""
        raise NotImplementedError


class CflTimeStep(TimeStepPolicy):
    """dt = cfl * dx / max|lambda|; a Courant number above one is an error"""

    def __init__(self, cfl: float):
        if not 0 < cfl <= 1:
            raise ValueError(f"cfl must lie in (0, 1], got {cfl}")
        self.cfl = cfl

    def time_step(self, max_speed: float, dx: float) -> float:
        if max_speed <= 0:
            return np.inf
        return self.cfl * dx / max_speed

    def check(self, courant: float, t: float) -> None:
        if courant > 1.0 + COURANT_SLACK:
            raise CflViolation(
                f"Courant number {courant!r} above one at t={t!r}", courant=courant
            )


class FixedRatioTimeStep(TimeStepPolicy):
    """dt = ratio * dx whatever the wave speeds; violations are only logged"""

    def __init__(self, ratio: float):
        if not ratio > 0:
            raise ValueError(f"fixed_ratio must be positive, got {ratio}")
        self.ratio = ratio

    def time_step(self, max_speed: float, dx: float) -> float:
        return self.ratio * dx

    def check(self, courant: float, t: float) -> None:
        if courant > 1.0 + COURANT_SLACK:
            logger.warning(
                "fixed dt/dx = %s gives Courant number %.6g at t=%.6g, the scheme is unstable",
                self.ratio,
                courant,
                t,
            )


class TimeStepPolicyFactory:
    """class to get the time-step policy from the solver settings"""

    def get_policy(self, cfl: float, fixed_ratio=None) -> TimeStepPolicy:
        """fixed_ratio wins when set, otherwise the CFL rule governs dt

        Args:
            cfl (float): Courant number target in (0, 1]
            fixed_ratio (Optional[float]): dt/dx override

        Returns:
            TimeStepPolicy: instance of TimeStepPolicy
        """
        if fixed_ratio is not None:
            return FixedRatioTimeStep(fixed_ratio)
        return CflTimeStep(cfl)


class BranchPolicy(ABC):
    """Chooses the branch sign of each cell used to invert the conserved map"""

    @abstractmethod
    def initial_signs(self, U: PrimitiveState) -> np.ndarray:
        """Cell-wise signs +1 (u_n > u_s) or -1 (u_n < u_s) for the initial data"""
        raise NotImplementedError


class PersistBranch(BranchPolicy):
    """Each cell keeps the branch of its initial state for the whole run"""

    def initial_signs(self, U: PrimitiveState) -> np.ndarray:
        signs = Branch.signs(U)
        logger.debug(
            "persisting branches: %d normal-faster and %d super-faster cells",
            int(np.sum(signs > 0)),
            int(np.sum(signs < 0)),
        )
        return signs


class FixedBranch(BranchPolicy):
    """Every cell uses the same branch"""

    def __init__(self, branch: Branch):
        self.branch = branch

    def initial_signs(self, U: PrimitiveState) -> np.ndarray:
        return np.full(np.shape(U.rho_n), float(self.branch.value))


class BranchPolicyFactory:
    """class to get the branch policy named in the solver settings"""

    def get_policy(self, name: str) -> BranchPolicy:
        """Gets the policy by name

        Args:
            name (str): one of "persist", "normal_faster", "super_faster"

        Raises:
            KeyError: error if the name is not a known policy

        Returns:
            BranchPolicy: instance of BranchPolicy
        """
        policies = {
            "persist": PersistBranch,
            "normal_faster": lambda: FixedBranch(Branch.NORMAL_FASTER),
            "super_faster": lambda: FixedBranch(Branch.SUPER_FASTER),
        }
        if name not in policies:
            raise KeyError(
                f"wrong value for 'branch_policy' expecting one of {list(policies)} we got {name}"
            )
        return policies[name]()
