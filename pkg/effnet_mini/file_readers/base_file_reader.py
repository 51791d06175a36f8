"""Base class for file readers"""

import csv
from pathlib import Path
from typing import List

from effnet_mini.exceptions import DataError


class BaseFileReader:
    """Base class for file readers"""

    def __init__(self, file_path: str):
        """Initialize the file reader with a file path"""
        self.file_path = Path(file_path)

    def read_bytes(self) -> bytes:
        """Read the whole file as bytes"""
        try:
            return self.file_path.read_bytes()
        except FileNotFoundError as e:
            raise DataError(f"File not found: {self.file_path}") from e
        except OSError as e:
            raise DataError(f"Could not read {self.file_path}: {e}") from e

    def read_csv_file(self) -> List[dict]:
        """Read the file and return a list of rows keyed by the header"""
        try:
            with open(self.file_path, "r", encoding="utf-8", newline="") as file:
                rows = list(csv.reader(file))
        except FileNotFoundError as e:
            raise DataError(f"File not found: {self.file_path}") from e
        if not rows:
            raise DataError(f"{self.file_path} is empty")
        headers = rows[0]
        return [dict(zip(headers, row)) for row in rows[1:] if row]

    def read_csv_header(self) -> List[str]:
        """The header row of a CSV file"""
        try:
            with open(self.file_path, "r", encoding="utf-8", newline="") as file:
                return next(csv.reader(file), [])
        except FileNotFoundError as e:
            raise DataError(f"File not found: {self.file_path}") from e
