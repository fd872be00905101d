"""Analysis orchestration service."""

import concurrent.futures
import logging
from typing import Any, Dict, List, Optional, Tuple, Union

from common.config.constants import AppConstants
from common.config.settings import SettingsManager
from common.utils.logger_utils import LoggerUtils
from common.utils.path_manager import PathManager
from domain.errors import DegenerationError, FlowInputError, ManifoldDefinitionError, NonConstantError
from domain.geometry.flow import FlowKind, FlowProblem
from domain.models.flow_request import FlowRequest, HomogeneousData
from domain.models.manifold_definition import ManifoldDefinition
from domain.models.report_request import ReportRequest
from infrastructure.executors.flow_executor import FlowExecutor
from infrastructure.repositories.report_repository import ReportRepository
from infrastructure.repositories.trajectory_repository import TrajectoryRepository
from service.pipeline.builder import AnalysisPipelineBuilder


class AnalysisOrchestrator:
    """
    Main orchestrator for the analysis workflow.
    Coordinates all components: builds a pipeline per command and fans
    flow parameter sweeps out to a thread pool.

    This is the Service Layer component that orchestrates business logic.
    """

    def __init__(self, settings: SettingsManager, logger: Optional[logging.Logger] = None):
        """
        Initialize orchestrator.

        Args:
            settings: Settings manager instance
            logger: Logger instance (created from settings when omitted)
        """
        self.settings = settings
        self.logger = logger or LoggerUtils.setup_logger("AnalysisOrchestrator", settings.get_log_level())

        # Initialize components
        self.path_manager = PathManager(settings.output_dir)
        self.report_repository = ReportRepository(self.logger)
        self.trajectory_repository = TrajectoryRepository(self.logger)
        self.flow_executor = FlowExecutor(settings, self.trajectory_repository, self.logger)

        self.logger.debug(f"Initialized with {settings}")

    # ------------------------------------------------------------------
    # symbolic commands
    # ------------------------------------------------------------------

    def _run(self, request: ReportRequest, builder: AnalysisPipelineBuilder, save_path: Optional[str]) -> ReportRequest:
        if save_path:
            builder.add_persistence(self.report_repository, save_path)
        pipeline = builder.add_logging().build()
        result = pipeline.handle(request)
        if not result.is_valid():
            self.logger.error(f"Input error: {result.input_error}")
        return result

    def check(self, definition: ManifoldDefinition, save_path: Optional[str] = None) -> ReportRequest:
        """
        Structure axioms only.

        Args:
            definition: Parsed manifold definition
            save_path: Also write the report here (optional)

        Returns:
            Processed request
        """
        request = ReportRequest(definition, "check", self.settings.ricci_convention, self.settings.get_d_conventions())
        builder = AnalysisPipelineBuilder(self.logger).add_validation()
        return self._run(request, builder, save_path)

    def report(self, definition: ManifoldDefinition, save_path: Optional[str] = None) -> ReportRequest:
        """
        Full analysis: structure, trans-Sasakian type, curvature, identities,
        soliton with V = xi, and the reference audit.
        """
        request = ReportRequest(definition, "report", self.settings.ricci_convention, self.settings.get_d_conventions())
        if definition.has_contact:
            builder = self._full_builder()
        else:
            builder = (
                AnalysisPipelineBuilder(self.logger)
                .add_validation()
                .add_trans_sasakian()
                .add_curvature()
                .add_identities()
                .add_discrepancies()
            )
        return self._run(request, builder, save_path)

    def soliton(
        self,
        definition: ManifoldDefinition,
        field: str = "xi",
        kind: str = "hyperbolic",
        pressure=None,
        save_path: Optional[str] = None,
    ) -> ReportRequest:
        """
        Soliton solve for a chosen field.

        Args:
            definition: Parsed manifold definition
            field: "xi" or comma-separated frame components
            kind: "hyperbolic" or "conformal"
            pressure: Conformal pressure (rational)
            save_path: Also write the report here (optional)

        Returns:
            Processed request
        """
        request = ReportRequest(
            definition,
            "soliton",
            self.settings.ricci_convention,
            self.settings.get_d_conventions(),
            soliton_field=field,
            soliton_kind=kind,
            pressure=pressure,
        )
        return self._run(request, self._full_builder(identities=False), save_path)

    def _full_builder(self, identities: bool = True) -> AnalysisPipelineBuilder:
        builder = AnalysisPipelineBuilder(self.logger).add_validation().add_trans_sasakian().add_curvature()
        if identities:
            builder.add_identities()
        return builder.add_soliton().add_discrepancies()

    # ------------------------------------------------------------------
    # flow
    # ------------------------------------------------------------------

    def build_flow_problem(
        self, source: Union[HomogeneousData, ManifoldDefinition], k0_scale: float
    ) -> FlowProblem:
        """
        Flow problem with ``k0 = k0_scale * g0``.

        Raises:
            FlowInputError: For singular, non-homogeneous or degenerate data
        """
        kind = FlowKind(self.settings.kind)
        kwargs = dict(
            kind=kind,
            pressure=float(self.settings.pressure) if self.settings.pressure is not None else 0.0,
            dt=self.settings.dt,
            steps=self.settings.get_step_count(),
            ricci_convention=self.settings.ricci_convention,
        )
        try:
            if isinstance(source, HomogeneousData):
                return FlowProblem(source.structure_constants, source.metric, k0_scale * source.metric, **kwargs)
            return FlowProblem.from_manifold(source.build(), k0_scale, **kwargs)
        except (ManifoldDefinitionError, NonConstantError) as e:
            raise FlowInputError(f"{source.source}: {e}") from e
        except DegenerationError as e:
            raise FlowInputError(f"{source.source}: degenerate at t = {e.time}: {e}") from e

    def flow(
        self,
        source: Union[HomogeneousData, ManifoldDefinition],
        check_sigma: Optional[Tuple[float, float]] = None,
    ) -> Tuple[Dict[str, Any], int]:
        """
        Integrate one run per configured k0 scale.

        Args:
            source: Homogeneous data or a manifold definition
            check_sigma: ``(lambda, mu)`` of the quadratic profile to compare against

        Returns:
            Summary document and exit code
        """
        summary: Dict[str, Any] = {
            "source": source.source,
            "kind": self.settings.kind,
            "pressure": None if self.settings.pressure is None else str(self.settings.pressure),
            "dt": self.settings.dt,
            "t_max": self.settings.t_max,
            "steps": self.settings.get_step_count(),
            "ricci_convention": self.settings.ricci_convention,
            "runs": [],
        }

        try:
            requests = [
                FlowRequest(
                    scale,
                    self.build_flow_problem(source, scale),
                    self.path_manager.get_trajectory_path(scale, self.settings.output_format),
                    check_sigma,
                )
                for scale in self.settings.k0_scales
            ]
        except FlowInputError as e:
            self.logger.error(str(e))
            summary["verdict"] = "input-error"
            summary["input_error"] = str(e)
            return summary, AppConstants.EXIT_INPUT_ERROR

        results = self.run_flow_sweep(requests)
        summary["runs"] = [r.to_summary(AppConstants.SELF_SIMILAR_TOLERANCE) for r in results]

        if any(r.error for r in results):
            summary["verdict"] = "input-error"
            return summary, AppConstants.EXIT_INPUT_ERROR
        within = all(
            r.sigma_deviation is None or r.sigma_deviation <= AppConstants.SELF_SIMILAR_TOLERANCE for r in results
        )
        if any(r.degenerated for r in results) or not within:
            summary["verdict"] = "fail"
            return summary, AppConstants.EXIT_FAILURES
        summary["verdict"] = "pass"
        return summary, AppConstants.EXIT_PASS

    def run_flow_sweep(self, requests: List[FlowRequest], worker_count: Optional[int] = None) -> List[FlowRequest]:
        """
        Run flow requests on a thread pool.

        Args:
            requests: One request per k0 scale, each with its own output path
            worker_count: Number of workers (default: from settings)

        Returns:
            Requests in submission order
        """
        worker_count = worker_count or self.settings.worker_count
        self.logger.info(f"Starting flow sweep: runs={len(requests)}, workers={worker_count}")

        with concurrent.futures.ThreadPoolExecutor(
            max_workers=worker_count, thread_name_prefix="Flow"
        ) as executor:
            future_to_request = {executor.submit(self.flow_executor.execute, r): r for r in requests}
            for future in concurrent.futures.as_completed(future_to_request):
                request = future_to_request[future]
                try:
                    future.result()
                except Exception as e:
                    request.mark_failure(f"Flow run error: {e}")
                    self.logger.error(f"[k0={request.k0_scale}] error: {e}")

        finished = sum(1 for r in requests if r.success)
        self.logger.info(f"Flow sweep finished: {finished}/{len(requests)} integrated")
        return requests
