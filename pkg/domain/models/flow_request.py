"""Flow run request data objects."""

from dataclasses import dataclass
from typing import Any, Dict, Optional, Tuple

import numpy as np

from domain.geometry.flow import FlowProblem, FlowTrajectory


@dataclass
class HomogeneousData:
    """Structure constants and a constant frame metric read from a constants file."""

    structure_constants: np.ndarray
    metric: np.ndarray
    source: str = "<memory>"

    @property
    def dimension(self) -> int:
        return self.metric.shape[0]


class FlowRequest:
    """
    Data object representing one flow integration in a sweep.
    Each request owns its problem and output path; nothing is shared.
    """

    def __init__(
        self,
        k0_scale: float,
        problem: FlowProblem,
        output_path: str,
        check_sigma: Optional[Tuple[float, float]] = None,
    ):
        """
        Initialize flow request.

        Args:
            k0_scale: Initial velocity is ``k0_scale * g0``
            problem: Fully built flow problem
            output_path: Trajectory file written for this run
            check_sigma: ``(lambda, mu)`` of the quadratic profile to compare against
        """
        self.k0_scale = k0_scale
        self.problem = problem
        self.output_path = output_path
        self.check_sigma = check_sigma

        # Results
        self.trajectory: Optional[FlowTrajectory] = None
        self.sigma_deviation: Optional[float] = None
        self.closed_form_deviation: Optional[float] = None
        self.success = False
        self.error: Optional[str] = None

    def mark_success(self, trajectory: FlowTrajectory):
        """
        Mark request as integrated.

        Args:
            trajectory: Sampled trajectory (possibly halted early)
        """
        self.success = True
        self.trajectory = trajectory
        self.error = None

    def mark_failure(self, error: str):
        """
        Mark request as failed.

        Args:
            error: Error message
        """
        self.success = False
        self.error = error

    @property
    def degenerated(self) -> bool:
        return self.trajectory is not None and self.trajectory.degenerated

    def to_summary(self, tolerance: float) -> Dict[str, Any]:
        """Per-run summary entry; no timestamps so repeated runs match."""
        summary: Dict[str, Any] = {"k0_scale": self.k0_scale, "output": self.output_path}
        if self.error:
            summary["error"] = self.error
            return summary
        trajectory = self.trajectory
        last = trajectory.diagnostics[-1]
        summary.update(
            {
                "samples": len(trajectory.times),
                "final_time": trajectory.times[-1],
                "halted": trajectory.halted,
                "halt_time": trajectory.halt_time,
                "final_determinant": last.determinant,
                "final_scalar_curvature": last.scalar_curvature,
                "max_symmetry_drift": max(d.symmetry_drift for d in trajectory.diagnostics),
            }
        )
        if self.check_sigma is not None:
            lam, mu = self.check_sigma
            summary["self_similar"] = {
                "lambda": lam,
                "mu": mu,
                "max_deviation": self.sigma_deviation,
                "within_tolerance": self.sigma_deviation <= tolerance,
            }
        if self.closed_form_deviation is not None:
            summary["closed_form_deviation"] = self.closed_form_deviation
        return summary

    def __repr__(self) -> str:
        """String representation."""
        status = "SUCCESS" if self.success else "FAILED"
        return f"FlowRequest(k0_scale={self.k0_scale}, status={status})"
