"""Exception hierarchy for the workbench.

Domain code raises these; the service layer records them on the request
object and the CLI maps them to exit codes.
"""

from typing import Optional, Tuple


class WorkbenchError(Exception):
    """Base class for all workbench errors."""


class ExpressionParseError(WorkbenchError):
    """Raised when expression text does not conform to the grammar."""

    def __init__(self, message: str, text: str = "", position: int = 0):
        self.text = text
        self.position = position
        super().__init__(f"{message} at position {position}")


class UnknownSymbolError(ExpressionParseError):
    """Raised when an identifier is not a registered coordinate."""


class SymbolicZeroDivisionError(WorkbenchError, ZeroDivisionError):
    """Raised when dividing by the zero expression."""


class EvaluationError(WorkbenchError):
    """Raised when numeric evaluation is impossible at a point."""


class SingularMatrixError(WorkbenchError):
    """Raised when exact Gaussian elimination finds no usable pivot."""

    def __init__(self, message: str, column: Optional[int] = None):
        self.column = column
        super().__init__(message)


class ManifoldDefinitionError(WorkbenchError):
    """Raised for inconsistent frame, metric or coordinate data."""


class StructureAxiomError(WorkbenchError):
    """Raised when an almost-contact axiom has a nonzero residual."""

    def __init__(
        self,
        equation: str,
        indices: Tuple[int, ...] = (),
        residual: str = "",
    ):
        self.equation = equation
        self.indices = indices
        self.residual = residual
        where = f" at index {indices}" if indices else ""
        super().__init__(f"violated: {equation}{where} (residual {residual})")


class TransSasakianError(WorkbenchError):
    """Raised when (alpha, beta) cannot be extracted or fail verification."""


class NonConstantError(WorkbenchError):
    """Raised when an operation requires constant expressions."""


class DegenerateProbeError(WorkbenchError):
    """Raised when a probe vector violates its nondegeneracy preconditions."""


class ThresholdHypothesisError(WorkbenchError):
    """Raised when the closed-form soliton thresholds need beta != 0."""


class DegenerationError(WorkbenchError):
    """Raised when the evolving metric becomes singular."""

    def __init__(self, message: str, time: float = 0.0):
        self.time = time
        super().__init__(message)


class InputFileError(WorkbenchError):
    """Raised when an input document cannot be read or validated."""


class FlowInputError(WorkbenchError):
    """Raised when flow input cannot be turned into a flow problem."""
