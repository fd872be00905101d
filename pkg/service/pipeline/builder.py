"""Analysis pipeline builder implementing Builder pattern."""

import logging
from typing import Optional

from infrastructure.repositories.report_repository import ReportRepository
from service.pipeline.handlers.base_handler import AnalysisHandler
from service.pipeline.handlers.curvature_handler import CurvatureHandler
from service.pipeline.handlers.discrepancy_handler import DiscrepancyHandler
from service.pipeline.handlers.identity_handler import IdentityHandler
from service.pipeline.handlers.logging_handler import LoggingHandler
from service.pipeline.handlers.persistence_handler import PersistenceHandler
from service.pipeline.handlers.soliton_handler import SolitonHandler
from service.pipeline.handlers.trans_sasakian_handler import TransSasakianHandler
from service.pipeline.handlers.validation_handler import ValidationHandler


class AnalysisPipelineBuilder:
    """
    Builds the analysis pipeline using Builder pattern.
    Chains handlers together using Chain of Responsibility pattern.
    """

    def __init__(self, logger: Optional[logging.Logger] = None):
        """
        Initialize pipeline builder.

        Args:
            logger: Logger handed to every handler
        """
        self._handlers = []
        self._logger = logger

    def add_validation(self) -> "AnalysisPipelineBuilder":
        """
        Add structure validation handler to pipeline.

        Returns:
            Self for method chaining
        """
        self._handlers.append(ValidationHandler(self._logger))
        return self

    def add_trans_sasakian(self) -> "AnalysisPipelineBuilder":
        self._handlers.append(TransSasakianHandler(self._logger))
        return self

    def add_curvature(self) -> "AnalysisPipelineBuilder":
        self._handlers.append(CurvatureHandler(self._logger))
        return self

    def add_identities(self) -> "AnalysisPipelineBuilder":
        self._handlers.append(IdentityHandler(self._logger))
        return self

    def add_soliton(self) -> "AnalysisPipelineBuilder":
        self._handlers.append(SolitonHandler(self._logger))
        return self

    def add_discrepancies(self) -> "AnalysisPipelineBuilder":
        self._handlers.append(DiscrepancyHandler(self._logger))
        return self

    def add_persistence(
        self, report_repository: ReportRepository, report_path: str
    ) -> "AnalysisPipelineBuilder":
        """
        Add persistence handler to pipeline.

        Args:
            report_repository: Report repository instance
            report_path: Destination file

        Returns:
            Self for method chaining
        """
        self._handlers.append(PersistenceHandler(report_repository, report_path, self._logger))
        return self

    def add_logging(self) -> "AnalysisPipelineBuilder":
        self._handlers.append(LoggingHandler(self._logger))
        return self

    def build(self) -> AnalysisHandler:
        """
        Build the pipeline by chaining handlers.

        Returns:
            First handler in the chain

        Raises:
            ValueError: If no handlers were added
        """
        if not self._handlers:
            raise ValueError("Pipeline must have at least one handler")

        # Chain handlers together
        for i in range(len(self._handlers) - 1):
            self._handlers[i].set_next(self._handlers[i + 1])

        # Return first handler
        return self._handlers[0]

    def reset(self) -> "AnalysisPipelineBuilder":
        """
        Reset builder to start fresh.

        Returns:
            Self for method chaining
        """
        self._handlers = []
        return self
