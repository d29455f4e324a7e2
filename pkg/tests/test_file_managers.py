"""MODULE TO TEST FILE MANAGERS FROM API UTILITIES"""

# pylint: disable=protected-access, wrong-import-position, import-error, unused-argument
import os
import sys
import numpy as np
import pytest

SCRIPT_DIR = os.path.dirname(os.path.abspath(__file__))
sys.path.append(os.path.dirname(SCRIPT_DIR))

from tests.base_tests import BaseTest
from api_utilities.exceptions import ConfigError
from api_utilities.file_managers import (
    ensure_directory,
    flatten_config,
    format_float,
    format_row,
    load_config,
    load_file,
    load_key_value_file,
    parse_value,
)


class TestFileManagers(BaseTest):
    """Class to Test File Managers Functions"""

    yml_file = BaseTest.fixture("experiment.yml")
    json_file = BaseTest.fixture("experiment.json")
    cfg_file = BaseTest.fixture("experiment.cfg")
    wrong_file = BaseTest.fixture("test_wrong_file_type.txt")

    def test_load_file(self):
        """Test load_file function from file_managers"""
        assert self.load_file(self.json_file) == load_file(self.json_file)
        assert self.load_file(self.yml_file) == load_file(self.yml_file)

        with pytest.raises(TypeError):
            load_file(self.wrong_file)

    def test_parse_value(self):
        """Ints, floats and strings"""
        assert parse_value(" 100 ") == 100
        assert parse_value("-0.1") == -0.1
        assert parse_value("1e-3") == 1e-3
        assert parse_value("persist") == "persist"

    def test_key_value_file(self):
        """Comments and blank lines are skipped"""
        config = load_key_value_file(self.cfg_file)
        assert config["c_tilde"] == 0.6
        assert config["n_cells"] == 100
        assert config["left.u_s"] == -0.1
        assert len(config) == 13

    @pytest.mark.parametrize("name", ["duplicate_key.cfg", "missing_equals.cfg"])
    def test_key_value_errors(self, name):
        """Repeated keys and lines without '=' are errors"""
        with pytest.raises(ConfigError):
            load_key_value_file(self.fixture(name))

    def test_flatten(self):
        """Nested mappings become dotted keys"""
        assert flatten_config({"a": 1, "left": {"rho_n": 2, "deep": {"x": 3}}}) == {
            "a": 1,
            "left.rho_n": 2,
            "left.deep.x": 3,
        }

    def test_all_formats_agree(self):
        """key=value, yml and json configs give the same mapping"""
        expected = load_config(self.cfg_file)
        assert load_config(self.yml_file) == expected
        assert load_config(self.json_file) == expected

    def test_format_row(self):
        """Shortest round-trip floats, booleans as 1/0"""
        assert format_float(0.1) == "0.1"
        assert format_float(np.float64(1) / 3) == "0.3333333333333333"
        assert format_row([1.0, 2, True, np.bool_(False), "rho_n", np.int64(3)]) == [
            "1.0",
            "2",
            "1",
            "0",
            "rho_n",
            "3",
        ]

    def test_ensure_directory(self, tmp_path):
        """Nested directories are created once"""
        target = tmp_path / "a" / "b"
        assert ensure_directory(str(target)) == target
        assert target.is_dir()
        assert ensure_directory(str(target)) == target
