"""Logging handler - final step: log results."""

from domain.models.report_request import ReportRequest
from service.pipeline.handlers.base_handler import AnalysisHandler


class LoggingHandler(AnalysisHandler):
    """
    Logs the outcome of an analysis.
    Last step in the chain.
    """

    def handle(self, request: ReportRequest) -> ReportRequest:
        """
        Log analysis results.

        Args:
            request: Report request

        Returns:
            Request after logging
        """
        source = request.definition.source
        if request.success:
            self.logger.info(f"[{source}] {request.command}: all checks pass")
        else:
            for failure in request.failures:
                self.logger.error(f"[{source}] {failure}")
            for entry in request.discrepancies:
                where = f" at {entry['index']}" if "index" in entry else ""
                self.logger.warning(
                    f"[{source}] discrepancy {entry['finding']}{where}: "
                    f"declared {entry['expected']}, computed {entry['computed']}"
                )

        # Proceed to next handler (if any)
        return self._call_next(request)
