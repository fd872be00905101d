"""Flow executor - Infrastructure layer for flow integration runs.

This is part of the Infrastructure Layer following layered architecture.
Runs one integration, its profile comparisons and its file output.
"""

import logging
from typing import Optional

from common.config.settings import SettingsManager
from domain.errors import DegenerationError
from domain.geometry.flow import closed_form_profile, integrate, self_similar_check
from domain.models.flow_request import FlowRequest
from infrastructure.repositories.trajectory_repository import TrajectoryRepository


class FlowExecutor:
    """
    Executes flow requests.
    Responsibilities:
    - Integrate the problem
    - Compare against the requested quadratic profile
    - Compare against the closed-form profile when the data are Einstein
    - Write the trajectory
    """

    def __init__(
        self,
        settings: SettingsManager,
        trajectory_repository: TrajectoryRepository,
        logger: Optional[logging.Logger] = None,
    ):
        """
        Initialize flow executor.

        Args:
            settings: Settings manager
            trajectory_repository: Output writer
            logger: Logger instance
        """
        self.settings = settings
        self.trajectory_repository = trajectory_repository
        self.logger = logger or logging.getLogger(__name__)

    def execute(self, request: FlowRequest) -> FlowRequest:
        """
        Run one integration.

        Args:
            request: Flow request

        Returns:
            The same request with results attached
        """
        problem = request.problem
        try:
            trajectory = integrate(problem)
        except DegenerationError as e:
            request.mark_failure(f"Degenerate at t = {e.time}: {e}")
            self.logger.error(f"[k0={request.k0_scale}] {request.error}")
            return request

        request.mark_success(trajectory)
        if trajectory.degenerated:
            self.logger.warning(
                f"[k0={request.k0_scale}] halted at t = {trajectory.halt_time:g}: {trajectory.halted}"
            )

        if request.check_sigma is not None:
            lam, mu = request.check_sigma
            request.sigma_deviation = self_similar_check(trajectory, problem.g0, lam, mu)

        profile = closed_form_profile(problem)
        if profile is not None:
            request.closed_form_deviation = self_similar_check(trajectory, problem.g0, profile=profile)

        metadata = {
            "k0_scale": request.k0_scale,
            "kind": problem.kind.value,
            "pressure": problem.pressure,
            "dt": problem.dt,
            "steps": problem.steps,
        }
        self.trajectory_repository.save(
            request.output_path, trajectory, self.settings.output_format, metadata
        )
        return request
