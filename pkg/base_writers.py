"""BASE WRITER MODULE"""

# pylint: disable=too-few-public-methods
from abc import ABC, abstractmethod
import csv
import sys
from pathlib import Path
from typing import Any, List, Optional, Sequence, Tuple

from api_utilities.file_managers import ensure_directory, format_row


class BaseResourceWriter(ABC):
    """Interface class for resource writers"""

    @abstractmethod
    def write_to_destination(self, write_path: str, data: Any) -> Optional[str]:
        """Method to write data to final destination resource

        Args:
            write_path (str): path of the data without extension, relative to the bucket
            data (Any): the data object to be written

        Raises:
            NotImplementedError: should be implemented by the child classes

        Returns:
            Optional[str]: full path written, None for streams
        """
        raise NotImplementedError


class LocalCSVWriter(BaseResourceWriter):
    """Writer Class for Local CSV; data is a header row followed by rows"""

    def __init__(self, bucket: str):
        self.bucket: str = bucket

    def write_to_destination(self, write_path: str, data: Sequence[Sequence[Any]]) -> str:
        full_path = Path(self.bucket) / f"{write_path}.csv"
        ensure_directory(str(full_path.parent))

        with open(full_path, mode="w", encoding="utf8", newline="") as csv_file:
            writer = csv.writer(csv_file, lineterminator="\n")
            for row in data:
                writer.writerow(format_row(row))
        print(f"done writing data to {full_path}")
        return str(full_path)


class StdoutCSVWriter(BaseResourceWriter):
    """Writer Class streaming CSV rows to standard output"""

    def __init__(self, bucket: str = ""):
        self.bucket: str = bucket

    def write_to_destination(self, write_path: str, data: Sequence[Sequence[Any]]) -> None:
        writer = csv.writer(sys.stdout, lineterminator="\n")
        for row in data:
            writer.writerow(format_row(row))


class LocalTextWriter(BaseResourceWriter):
    """Writer Class for plain text files such as plot scripts"""

    def __init__(self, bucket: str, extension: str = "gp"):
        self.bucket: str = bucket
        self.extension = extension

    def write_to_destination(self, write_path: str, data: str) -> str:
        full_path = Path(self.bucket) / f"{write_path}.{self.extension}"
        ensure_directory(str(full_path.parent))
        full_path.write_text(data, encoding="utf8")
        print(f"done writing data to {full_path}")
        return str(full_path)


class BaseWriter(ABC):
    """Normal Base Writer Class"""

    success: List[bool] = []

    def __init__(self, bucket: str, folder_path: str, destination: str):
        self.bucket = bucket
        self.folder_path = folder_path
        self.destination = destination
        self.resource = self._get_resource()
        self.written: List[str] = []

    def _get_resource(self) -> BaseResourceWriter:
        """Gets the appropriate WriterResource"""
        resource_writers = {
            "local_csv": LocalCSVWriter,
            "stdout_csv": StdoutCSVWriter,
            "local_text": LocalTextWriter,
        }
        if self.destination not in resource_writers:
            raise NotImplementedError(
                f"writer destination is wrong! allowed values: \n{list(resource_writers.keys())}"
            )
        return resource_writers[self.destination](self.bucket)

    def _path(self, name: str) -> str:
        return f"{self.folder_path}/{name}" if self.folder_path else name

    def write_data(self, payload: Any) -> Optional[str]:
        """Base Write Method to Destination"""
        write_path, data = self.verify_data(payload)
        if not data:
            self.not_success()
            return None
        full_path = self.resource.write_to_destination(write_path, data)
        if full_path:
            self.written.append(full_path)
        self.is_success()
        return full_path

    def is_success(self) -> None:
        """Append True to the Success List Object"""
        self.success.append(True)

    def not_success(self) -> None:
        """Append False to the Success List Object"""
        self.success.append(False)

    @abstractmethod
    def verify_data(self, payload: Any) -> Tuple[str, Any]:
        """Used to verify data is properly formatted and build the write path

        Args:
            payload (Any): writer specific mapping

        Raises:
            NotImplementedError: should be implemented by the child classes

        Returns:
            Tuple[str, Any]: write_path and data itself
        """
        raise NotImplementedError
