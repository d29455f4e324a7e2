"""READERS MODULE

Experiment configs and frame CSV files written by the simulate command.
"""
# pylint: disable=too-few-public-methods,import-error,arguments-differ
import csv
import logging
from dataclasses import dataclass
from typing import Any, Dict, List, Mapping, Optional

import numpy as np

from base_readers import BaseReader
from fvm import FRAME_FIELDS, SimulationSetup
from api_utilities.file_managers import load_config

logger = logging.getLogger(__name__)

FRAME_HEADER = ("x",) + FRAME_FIELDS


class ExperimentConfigReader(BaseReader):
    """Reader Class for key=value, yml and json experiment configs"""

    def __init__(self, config_filepath: str):
        self.config_filepath = config_filepath
        self.success: List[bool] = []

    def _read_handler(self) -> Dict[str, Any]:
        return load_config(self.config_filepath)

    def read(self, overrides: Optional[Mapping[str, Any]] = None) -> SimulationSetup:
        """Loads the config and applies command line overrides

        Raises:
            OSError: the file cannot be opened
            ConfigError: the content is not a valid experiment
        """
        try:
            setup = SimulationSetup.from_mapping(self._read_handler(), overrides)
        except Exception:
            self.not_success()
            raise
        self.is_success()
        logger.info("loaded experiment %s", self.config_filepath)
        return setup


@dataclass(frozen=True)
class FrameProfile:
    """Cell centers and fields read back from a frame CSV"""

    x: np.ndarray
    columns: Dict[str, np.ndarray]

    @property
    def dx(self) -> float:
        """Spacing of the cell centers"""
        if self.x.size < 2:
            return 1.0
        return float((self.x[-1] - self.x[0]) / (self.x.size - 1))

    def field(self, name: str) -> np.ndarray:
        """Column by name"""
        if name not in self.columns:
            raise KeyError(f"unknown field {name!r}, expecting one of {list(self.columns)}")
        return self.columns[name]


class FrameCSVReader(BaseReader):
    """Reader Class for frame_<index>.csv files"""

    def __init__(self, frame_filepath: str):
        self.frame_filepath = frame_filepath
        self.success: List[bool] = []

    def _read_handler(self) -> List[Dict[str, str]]:
        with open(self.frame_filepath, mode="r", encoding="utf8", newline="") as frame_file:
            reader = csv.DictReader(frame_file)
            header = tuple(reader.fieldnames or ())
            if header != FRAME_HEADER:
                raise ValueError(
                    f"{self.frame_filepath}: expected header {','.join(FRAME_HEADER)}, got {','.join(header)}"
                )
            return list(reader)

    def read(self) -> FrameProfile:
        """Parses the frame into float arrays

        Raises:
            OSError: the file cannot be opened
            ValueError: wrong header, empty frame or a non numeric cell
        """
        rows = self._read_handler()
        if not rows:
            self.not_success()
            raise ValueError(f"{self.frame_filepath}: frame has no cells")
        columns = {name: np.array([float(row[name]) for row in rows]) for name in FRAME_HEADER}
        self.is_success()
        return FrameProfile(x=columns.pop("x"), columns=columns)
