"""CSV AND PLOT SCRIPT WRITERS MODULE"""

# pylint: disable=too-few-public-methods,import-error
from typing import Any, Dict, List, Sequence, Tuple

from base_writers import BaseWriter
from fvm import SimulationFrame
from rankine_hugoniot import ShockCurve, classify_shock
from readers import FRAME_HEADER
from state_model import ModelParams

MONITOR_HEADER = ("t", "mass_n", "mass_s", "momentum", "energy", "min_density", "hyperbolic")
SHOCK_HEADER = (
    "sigma",
    "rho_n+",
    "rho_s+",
    "u_n+",
    "u_s+",
    "residual",
    "dissipation",
    "family",
    "lax_ok",
)
EOS_HEADER = ("beta", "F0", "F2", "S", "S_prime")


def _require(payload: Dict[str, Any], keys: Sequence[str]) -> None:
    if not set(keys).issubset(set(payload.keys())):
        raise KeyError(f"invalid payload expecting: {', '.join(keys)}")


class FrameWriter(BaseWriter):
    """Writer class for one solver frame per file

    Args:
        BaseWriter (_type_): inherits from BaseWriter
    """

    def __init__(self, bucket: str, folder_path: str = "", destination: str = "local_csv"):
        self.success: List[bool] = []
        super().__init__(bucket=bucket, folder_path=folder_path, destination=destination)

    def verify_data(self, payload: Dict[str, Any]) -> Tuple[str, List[Sequence[Any]]]:
        """Payload keys: frame (SimulationFrame), index (int)"""
        _require(payload, ("frame", "index"))
        frame = payload["frame"]
        if not isinstance(frame, SimulationFrame):
            raise TypeError("invalid data passed: expected SimulationFrame")
        if not isinstance(payload["index"], int) or payload["index"] < 0:
            raise TypeError(f"wrong 'index' value passed: {payload['index']}")

        columns = [frame.x] + [frame.field(name) for name in FRAME_HEADER[1:]]
        rows: List[Sequence[Any]] = [FRAME_HEADER]
        rows.extend(zip(*columns))
        return self._path(f"frame_{payload['index']}"), rows


class MonitorWriter(BaseWriter):
    """Writer class for the per-frame conservation and hyperbolicity monitors"""

    def __init__(self, bucket: str, folder_path: str = "", destination: str = "local_csv"):
        self.success: List[bool] = []
        super().__init__(bucket=bucket, folder_path=folder_path, destination=destination)

    def verify_data(self, payload: Dict[str, Any]) -> Tuple[str, List[Sequence[Any]]]:
        """Payload keys: frames (list of SimulationFrame)"""
        _require(payload, ("frames",))
        if not isinstance(payload["frames"], list):
            raise TypeError("invalid data passed: expected List[SimulationFrame]")
        if not payload["frames"]:
            return self._path("monitors"), []
        rows: List[Sequence[Any]] = [MONITOR_HEADER]
        for frame in payload["frames"]:
            rows.append(
                (
                    frame.t,
                    frame.total_mass_n,
                    frame.total_mass_s,
                    frame.total_momentum,
                    frame.total_energy,
                    frame.min_density,
                    frame.hyperbolic_everywhere,
                )
            )
        return self._path("monitors"), rows


class ShockCurveWriter(BaseWriter):
    """Writer class for one half of a shock curve, each point classified"""

    def __init__(
        self,
        bucket: str,
        params: ModelParams,
        folder_path: str = "",
        destination: str = "local_csv",
    ):
        self.success: List[bool] = []
        self.params = params
        super().__init__(bucket=bucket, folder_path=folder_path, destination=destination)

    def verify_data(self, payload: Dict[str, Any]) -> Tuple[str, List[Sequence[Any]]]:
        """Payload keys: curve (ShockCurve), name (str)"""
        _require(payload, ("curve", "name"))
        curve = payload["curve"]
        if not isinstance(curve, ShockCurve):
            raise TypeError("invalid data passed: expected ShockCurve")
        rows: List[Sequence[Any]] = [SHOCK_HEADER]
        for point in curve.points:
            verdict = classify_shock(point, curve.U_minus, self.params)
            rows.append(
                (point.sigma,)
                + tuple(point.U_plus.astuple())
                + (
                    point.residual_norm,
                    point.dissipation,
                    verdict.family if verdict.family is not None else 0,
                    verdict.lax_ok,
                )
            )
        return self._path(str(payload["name"])), rows


class EosTableWriter(BaseWriter):
    """Writer class for tabulated Bose-Einstein moments and entropy"""

    def __init__(self, bucket: str = "", folder_path: str = "", destination: str = "stdout_csv"):
        self.success: List[bool] = []
        super().__init__(bucket=bucket, folder_path=folder_path, destination=destination)

    def verify_data(self, payload: Dict[str, Any]) -> Tuple[str, List[Sequence[Any]]]:
        """Payload keys: rows (beta, F0, F2, S, S_prime tuples), name (str)"""
        _require(payload, ("rows", "name"))
        if any(len(row) != len(EOS_HEADER) for row in payload["rows"]):
            raise ValueError(f"eos rows must have {len(EOS_HEADER)} entries")
        if not payload["rows"]:
            return self._path(str(payload["name"])), []
        return self._path(str(payload["name"])), [EOS_HEADER] + list(payload["rows"])


class GnuplotWriter(BaseWriter):
    """Writer class for a gnuplot script plotting columns of a written CSV"""

    def __init__(self, bucket: str, folder_path: str = "", destination: str = "local_text"):
        self.success: List[bool] = []
        super().__init__(bucket=bucket, folder_path=folder_path, destination=destination)

    def verify_data(self, payload: Dict[str, Any]) -> Tuple[str, str]:
        """Payload keys: name (str), csv_files (list of paths), x (column), y (list of columns)"""
        _require(payload, ("name", "csv_files", "x", "y"))
        if not payload["csv_files"] or not payload["y"]:
            return self._path(str(payload["name"])), ""
        lines = [
            "set datafile separator ','",
            "set key autotitle columnhead",
            f"set xlabel '{payload['x']}'",
            "set terminal pngcairo size 1000,700",
            f"set output '{payload['name']}.png'",
        ]
        plots = [
            f"'{csv_file}' using '{payload['x']}':'{column}' with lines title '{column}'"
            for csv_file in payload["csv_files"]
            for column in payload["y"]
        ]
        lines.append("plot " + ", \\\n     ".join(plots))
        return self._path(str(payload["name"])), "\n".join(lines) + "\n"
