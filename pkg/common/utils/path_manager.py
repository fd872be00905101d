"""Path management following DRY principle."""

import os
from pathlib import Path

from common.config.constants import AppConstants

PROJECT_ROOT = Path(__file__).resolve().parent.parent.parent


class PathManager:
    """Centralized path generation and management."""

    def __init__(self, base_dir: str):
        """
        Initialize path manager.

        Args:
            base_dir: Base directory for all output paths
        """
        self.base_dir = os.path.normpath(base_dir)

    @staticmethod
    def get_schema_path(filename: str) -> str:
        """Path to a JSON schema shipped with the project."""
        return str(PROJECT_ROOT / AppConstants.SCHEMA_DIRNAME / filename)

    def get_report_path(self, stem: str = "") -> str:
        """
        Get path to a report file.

        Args:
            stem: Input file stem used as prefix (optional)

        Returns:
            Path to report JSON file
        """
        name = f"{stem}_{AppConstants.REPORT_FILENAME}" if stem else AppConstants.REPORT_FILENAME
        return os.path.join(self.base_dir, name)

    def get_trajectory_path(self, k0_scale: float, extension: str = "csv") -> str:
        """
        Get path to a trajectory file for one k0 scale.

        Args:
            k0_scale: Initial-velocity scale of the run
            extension: "csv" or "json"

        Returns:
            Path unique per scale, so sweep workers never share a file
        """
        label = format(k0_scale, "g").replace("-", "m").replace(".", "p")
        return os.path.join(self.base_dir, f"{AppConstants.TRAJECTORY_BASENAME}_k{label}.{extension}")
