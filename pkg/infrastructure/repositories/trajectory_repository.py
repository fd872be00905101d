"""Trajectory repository - writes flow trajectories as CSV or JSON."""

import logging
import os
import threading
from typing import Any, Dict, List, Optional

from common.config.constants import AppConstants
from common.utils.file_utils import FileUtils
from domain.geometry.flow import FlowTrajectory


def _number(value: float) -> str:
    return format(float(value), ".17g")


class TrajectoryRepository:
    """
    Persists flow trajectories.
    CSV columns: t, g upper triangle row-major, k upper triangle, det, r,
    einstein_residual.
    """

    def __init__(self, logger: Optional[logging.Logger] = None):
        """
        Initialize trajectory repository.

        Args:
            logger: Logger instance
        """
        self.logger = logger or logging.getLogger(__name__)
        self._dir_lock = threading.Lock()

    @staticmethod
    def csv_header(dimension: int) -> List[str]:
        pairs = [f"{i + 1}{j + 1}" for i in range(dimension) for j in range(i, dimension)]
        return (
            [AppConstants.CSV_TIME_COLUMN]
            + [AppConstants.CSV_METRIC_PREFIX + p for p in pairs]
            + [AppConstants.CSV_VELOCITY_PREFIX + p for p in pairs]
            + list(AppConstants.CSV_DIAGNOSTIC_COLUMNS)
        )

    @staticmethod
    def csv_rows(trajectory: FlowTrajectory) -> List[List[str]]:
        rows = []
        for t, g, k, diag in zip(
            trajectory.times, trajectory.metrics, trajectory.velocities, trajectory.diagnostics
        ):
            d = g.shape[0]
            upper = [(i, j) for i in range(d) for j in range(i, d)]
            rows.append(
                [_number(t)]
                + [_number(g[i, j]) for i, j in upper]
                + [_number(k[i, j]) for i, j in upper]
                + [_number(diag.determinant), _number(diag.scalar_curvature), _number(diag.einstein_residual)]
            )
        return rows

    def save(
        self,
        file_path: str,
        trajectory: FlowTrajectory,
        output_format: str = "csv",
        metadata: Optional[Dict[str, Any]] = None,
    ):
        """
        Write a trajectory file.

        Args:
            file_path: Destination path, unique per run
            trajectory: Trajectory to write
            output_format: "csv" or "json"
            metadata: Extra keys for the JSON document
        """
        with self._dir_lock:
            FileUtils.ensure_directory_exists(os.path.dirname(file_path) or ".")

        if output_format == "json":
            document = dict(metadata or {})
            document["trajectory"] = trajectory.to_dict()
            FileUtils.write_json_file(file_path, document)
        else:
            dimension = trajectory.metrics[0].shape[0]
            FileUtils.write_csv_file(file_path, self.csv_header(dimension), self.csv_rows(trajectory))
        self.logger.info(f"Saved trajectory ({len(trajectory.times)} samples): {file_path}")
