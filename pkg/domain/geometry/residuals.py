"""Residual tables shared by every identity check."""

from dataclasses import dataclass, field
from typing import Any, Dict, Iterable, Optional, Tuple, Union

from domain.symbolic.expr import Expr

Index = Tuple[Any, ...]


def _is_zero(residual) -> bool:
    if isinstance(residual, Expr):
        return residual.is_zero()
    return all(component.is_zero() for component in residual)


def _printed(residual) -> str:
    if isinstance(residual, Expr):
        return str(residual)
    return "[" + ", ".join(str(c) for c in residual) + "]"


def index_label(index: Index) -> str:
    """Render frame indices 1-based, e.g. (0, 2) -> "e1,e3"."""
    return ",".join(f"e{i + 1}" if isinstance(i, int) else str(i) for i in index)


@dataclass
class ResidualTable:
    """Left-minus-right residuals of one identity over a quantifier domain.

    Only nonzero residuals are stored; ``checked`` counts every evaluation.
    """

    identity: str
    domain: str
    checked: int = 0
    failures: Dict[str, str] = field(default_factory=dict)
    note: Optional[str] = None

    def record(self, index: Index, residual: Union[Expr, Iterable[Expr]]):
        residual = residual if isinstance(residual, Expr) else tuple(residual)
        self.checked += 1
        if not _is_zero(residual):
            self.failures[index_label(index)] = _printed(residual)

    @property
    def passed(self) -> bool:
        return not self.failures

    def first_failure(self) -> Optional[Tuple[str, str]]:
        return next(iter(self.failures.items()), None)

    def to_dict(self) -> Dict[str, Any]:
        data: Dict[str, Any] = {
            "identity": self.identity,
            "domain": self.domain,
            "checked": self.checked,
            "verdict": "pass" if self.passed else "fail",
        }
        first = self.first_failure()
        if first is not None:
            data["first_failure"] = {"index": first[0], "residual": first[1]}
            data["failure_count"] = len(self.failures)
        if self.note:
            data["note"] = self.note
        return data
