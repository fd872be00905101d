"""Manifold repository - Infrastructure layer for manifold definition files.

This is part of the Infrastructure Layer following layered architecture.
"""

import copy
import json
import logging
from typing import Any, List, Optional

from common.config.constants import AppConstants
from common.utils.file_utils import FileUtils
from domain.errors import ExpressionParseError, InputFileError, ManifoldDefinitionError
from domain.models.manifold_definition import ManifoldDefinition
from domain.symbolic.expr import Expr
from domain.symbolic.parser import ExpressionParser
from infrastructure.repositories.schema_validator import SchemaValidator


class ManifoldRepository:
    """
    Reads and writes manifold definition documents.
    Responsibilities:
    - JSON decoding with line/column error reporting
    - Schema validation and dimension consistency
    - Expression parsing with the offending entry located
    """

    def __init__(self, logger: Optional[logging.Logger] = None):
        """
        Initialize manifold repository.

        Args:
            logger: Logger instance
        """
        self.logger = logger or logging.getLogger(__name__)

    def load(self, file_path: str) -> ManifoldDefinition:
        """
        Load a manifold definition file.

        Args:
            file_path: Path to JSON file

        Returns:
            Parsed definition

        Raises:
            InputFileError: For unreadable, malformed or inconsistent input
        """
        try:
            text = FileUtils.read_text(file_path)
        except (IOError, OSError) as e:
            raise InputFileError(f"{file_path}: cannot read file ({e})") from e

        try:
            document = json.loads(text)
        except json.JSONDecodeError as e:
            raise InputFileError(
                f"{file_path}: invalid JSON at line {e.lineno}, column {e.colno}: {e.msg}"
            ) from e

        definition = self.from_document(document, source=file_path)
        self.logger.info(f"Loaded manifold definition: {definition}")
        return definition

    def from_document(self, document: Any, source: str = "<memory>") -> ManifoldDefinition:
        """
        Build a definition from a decoded document.

        Args:
            document: Decoded JSON document
            source: Document origin for error messages

        Returns:
            Parsed definition

        Raises:
            InputFileError: For schema, dimension or expression errors
        """
        SchemaValidator.validate(document, AppConstants.MANIFOLD_SCHEMA_FILENAME, source)
        coords = document["coordinates"]
        d = len(coords)

        self._check_square(document["frame"], "frame", d, source)
        self._check_square(document["metric"], "metric", d, source)
        contact = document.get("contact")
        if contact is not None:
            self._check_square(contact["phi"], "contact.phi", d, source)
            if len(contact["xi"]) != d:
                raise InputFileError(f"{source}: contact.xi must have {d} entries, got {len(contact['xi'])}")

        try:
            parser = ExpressionParser(coords)
        except (ExpressionParseError, ManifoldDefinitionError) as e:
            raise InputFileError(f"{source}: coordinates: {e}") from e

        def parse(text: str, location: str) -> Expr:
            try:
                return parser.parse(text)
            except ExpressionParseError as e:
                raise InputFileError(f"{source}: {location}: {e} in {text!r}") from e

        def parse_matrix(matrix: List[List[str]], label: str) -> List[List[Expr]]:
            return [
                [parse(entry, f"{label}[{i}][{j}]") for j, entry in enumerate(row)]
                for i, row in enumerate(matrix)
            ]

        return ManifoldDefinition(
            coordinates=list(coords),
            frame=parse_matrix(document["frame"], "frame"),
            metric=parse_matrix(document["metric"], "metric"),
            phi=parse_matrix(contact["phi"], "contact.phi") if contact else None,
            xi=[parse(entry, f"contact.xi[{i}]") for i, entry in enumerate(contact["xi"])] if contact else None,
            reference=copy.deepcopy(document.get("reference", {})),
            source=source,
        )

    @staticmethod
    def _check_square(matrix: List[List[str]], label: str, d: int, source: str):
        if len(matrix) != d or any(len(row) != d for row in matrix):
            shape = f"{len(matrix)}x{max((len(row) for row in matrix), default=0)}"
            raise InputFileError(f"{source}: {label} must be {d}x{d} to match the coordinates, got {shape}")

    def example(self) -> ManifoldDefinition:
        """Built-in three-dimensional example."""
        return self.from_document(copy.deepcopy(AppConstants.EXAMPLE_MANIFOLD), source="<example>")

    @staticmethod
    def dumps(definition: ManifoldDefinition) -> str:
        """
        Serialize a definition as deterministic JSON text.

        Args:
            definition: Definition to serialize

        Returns:
            JSON text that loads back to an equal definition
        """
        return FileUtils.dumps_json(definition.to_document())

    def save(self, file_path: str, definition: ManifoldDefinition):
        FileUtils.write_json_file(file_path, definition.to_document())
        self.logger.info(f"Saved manifold definition: {file_path}")
