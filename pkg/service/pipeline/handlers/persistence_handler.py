"""Persistence handler - save the report document."""

import logging
from typing import Optional

from domain.errors import InputFileError
from domain.models.report_request import ReportRequest
from infrastructure.repositories.report_repository import ReportRepository
from service.pipeline.handlers.base_handler import AnalysisHandler


class PersistenceHandler(AnalysisHandler):
    """
    Writes the report document to a file.
    Runs after the analysis handlers.
    """

    def __init__(
        self,
        report_repository: ReportRepository,
        report_path: str,
        logger: Optional[logging.Logger] = None,
    ):
        """
        Initialize persistence handler.

        Args:
            report_repository: Report repository instance
            report_path: Destination file
            logger: Logger instance
        """
        super().__init__(logger)
        self.report_repository = report_repository
        self.report_path = report_path

    def handle(self, request: ReportRequest) -> ReportRequest:
        """
        Save the report.

        Args:
            request: Report request

        Returns:
            Request after persistence
        """
        try:
            self.report_repository.save(self.report_path, request.to_document())
        except (OSError, InputFileError) as e:
            self.logger.error(f"[{request.definition.source}] report not saved: {e}")

        # Proceed to next handler
        return self._call_next(request)
