"""MODULE TO HELP WITH PROCESSING FILES"""
from numbers import Integral
from typing import Union, Dict, Any, Iterable, List
from pathlib import Path
import json
import numpy as np
import yaml

from api_utilities.exceptions import ConfigError

STRUCTURED_TYPES = ["json", "yml", "yaml"]


def load_file(file_location: str, fmt: Union[str, None] = None) -> Dict[Any, Any]:
    """
    Gathers file data from json or yaml.
    """
    config: dict = {}
    file_location = str(file_location).strip()
    extension = fmt or file_location.rsplit(".", maxsplit=1)[-1]
    if extension not in STRUCTURED_TYPES:
        raise TypeError("Wrong file type provided! Expecting only json and yaml files")

    with open(file_location, mode="r", encoding="utf8") as source_file:
        if extension in ["yml", "yaml"]:
            config = yaml.safe_load(source_file) or {}
        else:
            config = json.load(source_file)

    return config


def parse_value(raw: str) -> Union[int, float, str]:
    """Converts a config string to int, float or leaves it as a string"""
    raw = raw.strip()
    for cast in (int, float):
        try:
            return cast(raw)
        except ValueError:
            continue
    return raw


def load_key_value_file(file_location: str) -> Dict[str, Any]:
    """Reads a plain text ``key=value`` config, ignoring blanks and ``#`` comments

    Raises:
        ConfigError: a non empty line without ``=`` or a repeated key
    """
    config: Dict[str, Any] = {}
    with open(file_location, mode="r", encoding="utf8") as config_file:
        for number, line in enumerate(config_file, start=1):
            line = line.split("#", maxsplit=1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ConfigError(f"{file_location}:{number}: expected key=value, got {line!r}")
            key, value = (part.strip() for part in line.split("=", maxsplit=1))
            if key in config:
                raise ConfigError(f"{file_location}:{number}: duplicate key {key!r}")
            config[key] = parse_value(value)
    return config


def flatten_config(config: Dict[str, Any], prefix: str = "") -> Dict[str, Any]:
    """Flattens nested mappings to dotted keys e.g. {'left': {'rho_n': 1}} -> {'left.rho_n': 1}"""
    flat: Dict[str, Any] = {}
    for key, value in config.items():
        name = f"{prefix}{key}"
        if isinstance(value, dict):
            flat.update(flatten_config(value, prefix=f"{name}."))
        else:
            flat[name] = value
    return flat


def load_config(file_location: str) -> Dict[str, Any]:
    """Loads an experiment config from yml/yaml/json or key=value text, flattened"""
    file_location = str(file_location).strip()
    if file_location.rsplit(".", maxsplit=1)[-1] in STRUCTURED_TYPES:
        return flatten_config(load_file(file_location))
    return load_key_value_file(file_location)


def format_float(value: Any) -> str:
    """Shortest round-trip decimal representation of a float"""
    return repr(float(value))


def format_row(row: Iterable[Any]) -> List[str]:
    """Formats a row of csv cells: floats round-trip, bools as 1/0, rest as str"""
    cells: List[str] = []
    for value in row:
        if isinstance(value, (bool, np.bool_)):
            cells.append("1" if value else "0")
        elif isinstance(value, (Integral, str)):
            cells.append(str(value))
        else:
            cells.append(format_float(value))
    return cells


def ensure_directory(folder_path: str) -> Path:
    """Creates a directory tree if it does not exist yet"""
    path = Path(folder_path)
    path.mkdir(parents=True, exist_ok=True)
    return path
