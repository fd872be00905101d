"""File utilities following DRY principle."""

import csv
import json
import os
from typing import Any, Iterable, List, Sequence

from common.config.constants import AppConstants


class FileUtils:
    """Text, JSON and CSV I/O shared by the repositories."""

    @staticmethod
    def read_text(file_path: str) -> str:
        """
        Read a text file, trying each encoding in ``AppConstants.ENCODING_OPTIONS``.

        Raises:
            OSError: missing file or no encoding decodes it
        """
        last_error = None
        for encoding in AppConstants.ENCODING_OPTIONS:
            try:
                with open(file_path, "r", encoding=encoding) as f:
                    return f.read()
            except UnicodeDecodeError as e:
                last_error = e
        raise OSError(f"{file_path}: not valid text ({last_error})")

    @staticmethod
    def read_json_file(file_path: str) -> Any:
        """Parse a JSON file. Decode errors propagate to the caller."""
        return json.loads(FileUtils.read_text(file_path))

    @staticmethod
    def dumps_json(data: Any, indent: int = 2) -> str:
        """Canonical JSON text: sorted keys, fixed indent, trailing newline."""
        return json.dumps(data, ensure_ascii=False, indent=indent, sort_keys=True) + "\n"

    @staticmethod
    def write_json_file(file_path: str, data: Any, indent: int = 2):
        """Write ``data`` in canonical form, creating the parent directory."""
        FileUtils.ensure_parent_directory(file_path)
        with open(file_path, "w", encoding="utf-8", newline="\n") as f:
            f.write(FileUtils.dumps_json(data, indent))

    @staticmethod
    def write_csv_file(file_path: str, header: Sequence[str], rows: Iterable[Sequence[Any]]):
        """
        Write a header row followed by ``rows``.

        Args:
            file_path: Destination; the parent directory is created
            header: Column names
            rows: Row values in column order
        """
        FileUtils.ensure_parent_directory(file_path)
        with open(file_path, "w", encoding="utf-8", newline="") as f:
            writer = csv.writer(f, lineterminator="\n")
            writer.writerow(header)
            writer.writerows(rows)

    @staticmethod
    def read_csv_file(file_path: str) -> List[List[str]]:
        with open(file_path, "r", encoding="utf-8", newline="") as f:
            return list(csv.reader(f))

    @staticmethod
    def ensure_directory_exists(directory: str):
        os.makedirs(directory, exist_ok=True)

    @staticmethod
    def ensure_parent_directory(file_path: str):
        FileUtils.ensure_directory_exists(os.path.dirname(os.path.abspath(file_path)))
