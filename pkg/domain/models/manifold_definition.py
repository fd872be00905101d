"""Parsed manifold-definition data object."""

from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional

from domain.geometry.frame import FrameManifold, FrameVectorField, build_manifold
from domain.symbolic.expr import Expr

ExprMatrix = List[List[Expr]]


@dataclass
class ManifoldDefinition:
    """
    Frame presentation of a manifold as read from a definition file.

    ``phi`` is column-wise (column j = frame components of phi(e_j)).
    ``reference`` holds declared values kept as text for later comparison.
    """

    coordinates: List[str]
    frame: ExprMatrix
    metric: ExprMatrix
    phi: Optional[ExprMatrix] = None
    xi: Optional[List[Expr]] = None
    reference: Dict[str, Any] = field(default_factory=dict)
    source: str = "<memory>"

    @property
    def dimension(self) -> int:
        return len(self.coordinates)

    @property
    def has_contact(self) -> bool:
        return self.phi is not None and self.xi is not None

    def build(self) -> FrameManifold:
        """
        Build the frame manifold.

        Returns:
            FrameManifold with brackets and metric inverse cached

        Raises:
            ManifoldDefinitionError: For singular or inconsistent data
        """
        return build_manifold(self.coordinates, self.frame, self.metric)

    def xi_field(self) -> Optional[FrameVectorField]:
        return FrameVectorField(tuple(self.xi)) if self.xi is not None else None

    def to_document(self) -> Dict[str, Any]:
        """Serialize back to the file layout with canonical expression text."""

        def text(matrix):
            return [[str(entry) for entry in row] for row in matrix]

        document: Dict[str, Any] = {
            "coordinates": list(self.coordinates),
            "frame": text(self.frame),
            "metric": text(self.metric),
        }
        if self.has_contact:
            document["contact"] = {"phi": text(self.phi), "xi": [str(v) for v in self.xi]}
        if self.reference:
            document["reference"] = self.reference
        return document

    def __repr__(self) -> str:
        """String representation."""
        contact = "with contact" if self.has_contact else "no contact"
        return f"ManifoldDefinition(source={self.source}, dim={self.dimension}, {contact})"
