"""TEST MODULE FOR CSV AND PLOT SCRIPT WRITERS"""
# pylint: disable=no-member, import-error,wrong-import-position, protected-access
import csv
import os
import sys
import pytest

SCRIPT_DIR = os.path.dirname(os.path.abspath(__file__))
sys.path.append(os.path.dirname(SCRIPT_DIR))

from base_writers import LocalCSVWriter, LocalTextWriter, StdoutCSVWriter
from fvm import Grid1D, SolverConfig, run
from rankine_hugoniot import Direction, ShockCurve, ShockPoint
from readers import FrameCSVReader
from state_model import ModelParams, PrimitiveState
from tests.base_tests import BaseTest
from writers import (
    EosTableWriter,
    FrameWriter,
    GnuplotWriter,
    MonitorWriter,
    ShockCurveWriter,
)

LEFT = PrimitiveState(1.0, 4.0, 0.1, -0.1)
RIGHT = PrimitiveState(0.8, 3.5, 0.1, -0.1)


def read_rows(path):
    """Rows of a csv file"""
    with open(path, mode="r", encoding="utf8", newline="") as csv_file:
        return list(csv.reader(csv_file))


class TestWriter(BaseTest):
    """Test Class for Writers"""

    @pytest.fixture
    def frames(self):
        """A short run with a few frames"""
        return run(
            SolverConfig(t_final=0.02, output_every=5), Grid1D(-1.0, 1.0, 20), LEFT, RIGHT, self.reference_params
        )

    def test_writers_init(self, tmp_path):
        """Test Writers init Function"""
        writer = FrameWriter(bucket=str(tmp_path), folder_path="run")
        assert writer.bucket == str(tmp_path)
        assert writer.folder_path == "run"
        assert writer.destination == "local_csv"
        assert isinstance(writer.resource, LocalCSVWriter)
        assert isinstance(EosTableWriter().resource, StdoutCSVWriter)
        assert isinstance(GnuplotWriter(bucket=str(tmp_path)).resource, LocalTextWriter)
        assert any(writer.success) is False

    def test_wrong_destination(self, tmp_path):
        """Unknown destinations are rejected"""
        with pytest.raises(NotImplementedError):
            FrameWriter(bucket=str(tmp_path), destination="aws_s3_json")

    def test_frame_round_trip(self, tmp_path, frames, capsys):
        """A written frame reads back to the same fields"""
        writer = FrameWriter(bucket=str(tmp_path))
        path = writer.write_data({"frame": frames[-1], "index": 3})
        assert path == str(tmp_path / "frame_3.csv")
        assert "done writing data to" in capsys.readouterr().out
        rows = read_rows(path)
        assert rows[0] == ["x", "rho_n", "rho_s", "u_n", "u_s", "p", "E"]
        assert len(rows) == 21
        profile = FrameCSVReader(path).read()
        assert list(profile.field("rho_n")) == list(frames[-1].field("rho_n"))
        assert list(profile.x) == list(frames[-1].x)
        assert writer.success == [True]

    def test_frame_payload_checks(self, tmp_path, frames):
        """Missing keys and wrong types"""
        writer = FrameWriter(bucket=str(tmp_path))
        with pytest.raises(KeyError):
            writer.write_data({"frame": frames[0]})
        with pytest.raises(TypeError):
            writer.write_data({"frame": "frame", "index": 0})
        with pytest.raises(TypeError):
            writer.write_data({"frame": frames[0], "index": -1})

    def test_monitors(self, tmp_path, frames):
        """One row per frame"""
        path = MonitorWriter(bucket=str(tmp_path)).write_data({"frames": frames})
        rows = read_rows(path)
        assert rows[0] == ["t", "mass_n", "mass_s", "momentum", "energy", "min_density", "hyperbolic"]
        assert len(rows) == len(frames) + 1
        assert rows[1][0] == "0.0"
        assert rows[-1][0] == "0.02"
        assert {row[-1] for row in rows[1:]} == {"1"}

    def test_empty_payload_not_written(self, tmp_path, mocker):
        """Nothing to write records a failure and skips the resource"""
        writer = MonitorWriter(bucket=str(tmp_path))
        spy = mocker.spy(writer.resource, "write_to_destination")
        assert writer.write_data({"frames": []}) is None
        spy.assert_not_called()
        assert writer.success == [False]

    def test_shock_curve(self, tmp_path):
        """Header and classified trivial point"""
        seed = PrimitiveState(1.0, 1.0, 1.0, 0.0)
        curve = ShockCurve(seed, 0.0, Direction.INCREASING, base_speed=0.0)
        curve.points.append(ShockPoint(0.0, seed, 0.0, 0.0))
        path = ShockCurveWriter(bucket=str(tmp_path), params=ModelParams(1.0, 1.0)).write_data(
            {"curve": curve, "name": "shock_increasing"}
        )
        rows = read_rows(path)
        assert rows[0] == ["sigma", "rho_n+", "rho_s+", "u_n+", "u_s+", "residual", "dissipation", "family", "lax_ok"]
        assert rows[1][:5] == ["0.0", "1.0", "1.0", "1.0", "0.0"]

    def test_eos_to_stdout(self, capsys):
        """The table streams to stdout without a status line"""
        EosTableWriter().write_data({"rows": [(0.5, 1.0, 2.0, 3.0, -4.0)], "name": "eos"})
        assert capsys.readouterr().out == "beta,F0,F2,S,S_prime\n0.5,1.0,2.0,3.0,-4.0\n"

    def test_eos_row_length(self):
        """Rows have five entries"""
        with pytest.raises(ValueError):
            EosTableWriter().write_data({"rows": [(0.5, 1.0)], "name": "eos"})

    def test_gnuplot(self, tmp_path):
        """The script plots every requested column of every file"""
        path = GnuplotWriter(bucket=str(tmp_path)).write_data(
            {"name": "frames", "csv_files": ["a.csv", "b.csv"], "x": "x", "y": ["rho_n"]}
        )
        assert path == str(tmp_path / "frames.gp")
        script = (tmp_path / "frames.gp").read_text(encoding="utf8")
        assert "set datafile separator ','" in script
        assert script.count("with lines") == 2
