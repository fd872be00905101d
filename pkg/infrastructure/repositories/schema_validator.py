"""JSON schema validation for input and report documents."""

import json
import threading
from typing import Any, Dict

import jsonschema
from jsonschema.exceptions import best_match

from common.utils.file_utils import FileUtils
from common.utils.path_manager import PathManager
from domain.errors import InputFileError


class SchemaValidator:
    """Loads the shipped schemas once and validates documents against them."""

    _cache: Dict[str, Dict[str, Any]] = {}
    _lock = threading.Lock()

    @classmethod
    def load_schema(cls, filename: str) -> Dict[str, Any]:
        """
        Load a schema from the schema directory.

        Args:
            filename: Schema file name

        Returns:
            Parsed schema document
        """
        with cls._lock:
            if filename not in cls._cache:
                text = FileUtils.read_text(PathManager.get_schema_path(filename))
                cls._cache[filename] = json.loads(text)
            return cls._cache[filename]

    @classmethod
    def validate(cls, document: Any, filename: str, source: str = "<memory>"):
        """
        Validate a document against a schema.

        Args:
            document: Parsed JSON document
            filename: Schema file name
            source: Document origin, used in the error message

        Raises:
            InputFileError: With the JSON path of the first violation
        """
        schema = cls.load_schema(filename)
        validator = jsonschema.Draft7Validator(schema)
        error = best_match(validator.iter_errors(document))
        if error is not None:
            location = "".join(
                f"[{part}]" if isinstance(part, int) else f".{part}" for part in error.absolute_path
            )
            raise InputFileError(f"{source}: schema violation at ${location}: {error.message}")
