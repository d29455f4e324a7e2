"""BASE READER FOR ALL READERS"""

from abc import ABC, abstractmethod
from typing import Any, List


class BaseReader(ABC):
    """Base Reader Class Guiding All Readers"""

    success: List[bool] = []

    @abstractmethod
    def _read_handler(self, **kwargs):
        """Opens and parses the source"""
        raise NotImplementedError

    @abstractmethod
    def read(self, **kwargs) -> Any:
        """Calls the _read_handler method and builds the domain object"""
        raise NotImplementedError

    def is_success(self):
        """Records the success status of the read"""
        self.success.append(True)

    def not_success(self):
        """Records the failed status of the read"""
        self.success.append(False)
