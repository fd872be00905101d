"""Base handler for Chain of Responsibility pattern."""

import logging
from abc import ABC, abstractmethod
from typing import Optional

from domain.models.report_request import ReportRequest


class AnalysisHandler(ABC):
    """
    Base class for report request handlers.
    Implements the Chain of Responsibility pattern.
    """

    def __init__(self, logger: Optional[logging.Logger] = None):
        """
        Initialize handler.

        Args:
            logger: Logger instance
        """
        self._next_handler: Optional[AnalysisHandler] = None
        self.logger = logger or logging.getLogger(__name__)

    def set_next(self, handler: "AnalysisHandler") -> "AnalysisHandler":
        """
        Set the next handler in the chain.

        Args:
            handler: Next handler

        Returns:
            The next handler (for chaining)
        """
        self._next_handler = handler
        return handler

    @abstractmethod
    def handle(self, request: ReportRequest) -> ReportRequest:
        """
        Handle the report request.

        Args:
            request: Report request

        Returns:
            Modified report request
        """
        pass

    def _call_next(self, request: ReportRequest) -> ReportRequest:
        """
        Call the next handler in the chain.

        Args:
            request: Report request

        Returns:
            Report request from next handler
        """
        if self._next_handler:
            return self._next_handler.handle(request)
        return request
