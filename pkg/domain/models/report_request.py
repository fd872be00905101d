"""Analysis report request data object."""

from typing import Any, Dict, List, Optional

from common.config.constants import AppConstants
from domain.models.manifold_definition import ManifoldDefinition


class ReportRequest:
    """
    Data object carrying one manifold through the analysis pipeline.
    Used in the Chain of Responsibility pattern: each handler reads the
    intermediate results it needs and adds its own report section.
    """

    def __init__(
        self,
        definition: ManifoldDefinition,
        command: str = "report",
        ricci_convention: str = "standard",
        d_conventions: Optional[List[str]] = None,
        soliton_field: str = "xi",
        soliton_kind: str = "hyperbolic",
        pressure=None,
    ):
        """
        Initialize report request.

        Args:
            definition: Parsed manifold definition
            command: CLI command that issued the request
            ricci_convention: "standard" or "flipped"
            d_conventions: Exterior-derivative conventions to report
            soliton_field: "xi" or comma-separated frame components
            soliton_kind: "hyperbolic" or "conformal"
            pressure: Conformal pressure (rational), conformal kind only
        """
        self.definition = definition
        self.command = command
        self.ricci_convention = ricci_convention
        self.d_conventions = d_conventions or ["half", "full"]
        self.soliton_field = soliton_field
        self.soliton_kind = soliton_kind
        self.pressure = pressure

        # Intermediate results shared between handlers
        self.manifold = None
        self.connection = None
        self.contact = None
        self.trans_sasakian = None
        self.curvature = None
        self.values: Dict[str, Any] = {}

        # Results
        self.sections: Dict[str, Any] = {}
        self.discrepancies: List[Dict[str, Any]] = []
        self.failures: List[str] = []
        self.input_error: Optional[str] = None

    def add_section(self, name: str, content: Any):
        self.sections[name] = content

    def add_discrepancy(self, finding: str, expected: str, computed: str, index: Optional[str] = None):
        """
        Record a declared-versus-computed mismatch.

        Args:
            finding: Short identifier of what was compared
            expected: Declared or closed-form value
            computed: Value computed from the definition
            index: Frame index label, if the value is a component
        """
        entry = {"finding": finding, "expected": expected, "computed": computed}
        if index is not None:
            entry["index"] = index
        self.discrepancies.append(entry)

    def mark_failure(self, error: str):
        """
        Record a failed check; later handlers still run.

        Args:
            error: Failure description
        """
        self.failures.append(error)

    def mark_input_error(self, error: str):
        """
        Record an input error; later handlers skip their work.

        Args:
            error: Error message
        """
        self.input_error = error

    def is_valid(self) -> bool:
        """
        Check if request can still be processed.

        Returns:
            True while no input error was recorded
        """
        return self.input_error is None

    @property
    def success(self) -> bool:
        return self.is_valid() and not self.failures and not self.discrepancies

    def to_document(self) -> Dict[str, Any]:
        """Report document with the sections of this command; no timestamps."""
        document: Dict[str, Any] = {
            "source": self.definition.source if self.definition else None,
            "command": self.command,
            "ricci_convention": self.ricci_convention,
            "verdict": "pass" if self.success else ("input-error" if self.input_error else "fail"),
            "failures": list(self.failures),
        }
        if self.input_error:
            document["input_error"] = self.input_error
        sections = AppConstants.COMMAND_SECTIONS.get(self.command, AppConstants.REPORT_SECTIONS)
        for name in sections:
            if name in self.sections:
                document[name] = self.sections[name]
        if "discrepancies" in sections:
            document["discrepancies"] = list(self.discrepancies)
        return document

    def exit_code(self) -> int:
        """0 when everything passes, 1 for failures or discrepancies, 2 for input errors."""
        if self.input_error:
            return AppConstants.EXIT_INPUT_ERROR
        return AppConstants.EXIT_PASS if self.success else AppConstants.EXIT_FAILURES

    def __repr__(self) -> str:
        """String representation."""
        status = "ERROR" if self.input_error else "PASS" if self.success else "FAIL"
        return f"ReportRequest(command={self.command}, status={status}, sections={list(self.sections)})"
