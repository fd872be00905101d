"""Flow input repository - reads homogeneous data or manifold files."""

import json
import logging
from fractions import Fraction
from typing import Any, Optional, Union

import numpy as np

from common.config.constants import AppConstants
from common.utils.file_utils import FileUtils
from domain.errors import InputFileError, ManifoldDefinitionError
from domain.geometry.flow import structure_constants_from_table
from domain.models.flow_request import HomogeneousData
from domain.models.manifold_definition import ManifoldDefinition
from infrastructure.repositories.manifold_repository import ManifoldRepository
from infrastructure.repositories.schema_validator import SchemaValidator


class FlowInputRepository:
    """
    Loads flow input. A document with a ``structure_constants`` key is read
    as homogeneous data; anything else must be a manifold definition.
    """

    def __init__(
        self,
        manifold_repository: Optional[ManifoldRepository] = None,
        logger: Optional[logging.Logger] = None,
    ):
        """
        Initialize flow input repository.

        Args:
            manifold_repository: Repository used for manifold files
            logger: Logger instance
        """
        self.logger = logger or logging.getLogger(__name__)
        self.manifold_repository = manifold_repository or ManifoldRepository(self.logger)

    def load(self, file_path: str) -> Union[HomogeneousData, ManifoldDefinition]:
        """
        Load a constants file or a manifold file.

        Args:
            file_path: Path to JSON file

        Returns:
            HomogeneousData or ManifoldDefinition

        Raises:
            InputFileError: For unreadable or invalid input
        """
        try:
            text = FileUtils.read_text(file_path)
            document = json.loads(text)
        except (IOError, OSError) as e:
            raise InputFileError(f"{file_path}: cannot read file ({e})") from e
        except json.JSONDecodeError as e:
            raise InputFileError(
                f"{file_path}: invalid JSON at line {e.lineno}, column {e.colno}: {e.msg}"
            ) from e

        if isinstance(document, dict) and "structure_constants" in document:
            data = self.from_document(document, source=file_path)
            self.logger.info(f"Loaded structure constants: {file_path} (dim={data.dimension})")
            return data
        return self.manifold_repository.from_document(document, source=file_path)

    @staticmethod
    def from_document(document: Any, source: str = "<memory>") -> HomogeneousData:
        """
        Build homogeneous data from a decoded constants document.

        Raises:
            InputFileError: For schema or dimension errors
        """
        SchemaValidator.validate(document, AppConstants.CONSTANTS_SCHEMA_FILENAME, source)
        rows = document["metric"]
        d = len(rows)
        if any(len(row) != d for row in rows):
            raise InputFileError(f"{source}: metric must be a square matrix")
        try:
            metric = np.array([[float(Fraction(str(v))) for v in row] for row in rows])
        except (ValueError, ZeroDivisionError) as e:
            raise InputFileError(f"{source}: metric entries must be rational ({e})") from e
        try:
            c = structure_constants_from_table(document["structure_constants"], d)
        except (ManifoldDefinitionError, ValueError, ZeroDivisionError) as e:
            raise InputFileError(f"{source}: structure_constants: {e}") from e
        return HomogeneousData(c, metric, source)
