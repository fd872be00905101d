"""Report repository - validates and writes report documents."""

import logging
import os
from typing import Any, Dict, Optional

from common.config.constants import AppConstants
from common.utils.file_utils import FileUtils
from infrastructure.repositories.schema_validator import SchemaValidator


class ReportRepository:
    """Schema-checked, byte-stable report output."""

    def __init__(self, logger: Optional[logging.Logger] = None):
        """
        Initialize report repository.

        Args:
            logger: Logger instance
        """
        self.logger = logger or logging.getLogger(__name__)

    @staticmethod
    def validate(document: Dict[str, Any]):
        """
        Validate a report against the shipped schema.

        Raises:
            InputFileError: If the document does not conform
        """
        SchemaValidator.validate(document, AppConstants.REPORT_SCHEMA_FILENAME, "report")

    def dumps(self, document: Dict[str, Any]) -> str:
        """Validated JSON text with sorted keys."""
        self.validate(document)
        return FileUtils.dumps_json(document)

    def save(self, file_path: str, document: Dict[str, Any]):
        """
        Validate and write a report.

        Args:
            file_path: Destination path
            document: Report document
        """
        text = self.dumps(document)
        FileUtils.ensure_directory_exists(os.path.dirname(file_path) or ".")
        with open(file_path, "w", encoding="utf-8", newline="\n") as f:
            f.write(text)
        self.logger.info(f"Saved report: {file_path}")
