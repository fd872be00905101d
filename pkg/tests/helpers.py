"""Shared fixtures for the test suite."""

import copy
import os
import sys
from fractions import Fraction

# Add parent directory to path
parent_dir = os.path.abspath(os.path.join(os.path.dirname(__file__), ".."))
if parent_dir not in sys.path:
    sys.path.insert(0, parent_dir)

from common.config.constants import AppConstants  # noqa: E402
from domain.geometry.contact import ContactStructure  # noqa: E402
from domain.geometry.frame import FrameManifold, FrameVectorField, levi_civita  # noqa: E402
from domain.symbolic.expr import Expr  # noqa: E402
from domain.symbolic.parser import ExpressionParser  # noqa: E402

PROJECT_ROOT = parent_dir

XYZ = ["x", "y", "z"]


def parse_matrix(rows, coords=XYZ):
    parser = ExpressionParser(coords)
    return [[parser.parse(entry) for entry in row] for row in rows]


def example_document():
    """Deep copy of the built-in example document."""
    return copy.deepcopy(AppConstants.EXAMPLE_MANIFOLD)


def example_manifold() -> FrameManifold:
    doc = AppConstants.EXAMPLE_MANIFOLD
    return FrameManifold(XYZ, parse_matrix(doc["frame"]), parse_matrix(doc["metric"]))


def example_contact(manifold: FrameManifold = None) -> ContactStructure:
    m = manifold or example_manifold()
    doc = AppConstants.EXAMPLE_MANIFOLD["contact"]
    xi = FrameVectorField(tuple(ExpressionParser(XYZ).parse(v) for v in doc["xi"]))
    return ContactStructure.build(m, levi_civita(m), parse_matrix(doc["phi"]), xi)


def heisenberg_manifold(p: Fraction = 1, q: Fraction = 1, r: Fraction = 1) -> FrameManifold:
    """``e1 = p d/dx``, ``e2 = q (d/dy + x d/dz)``, ``e3 = r d/dz``; then [e1, e2] = (p q / r) e3."""
    zero, x = Expr.zero(), Expr.symbol("x")
    frame = [
        [Expr.constant(p), zero, zero],
        [zero, Expr.constant(q), q * x],
        [zero, zero, Expr.constant(r)],
    ]
    metric = parse_matrix([["1", "0", "0"], ["0", "1", "0"], ["0", "0", "-1"]])
    return FrameManifold(XYZ, frame, metric)


def sheared_frame_manifold(m: FrameManifold, s: Fraction) -> FrameManifold:
    """Same metric in the frame ``e1 + s e3, e2, e3``."""
    shear = [[1, 0, s], [0, 1, 0], [0, 0, 1]]

    def conjugate(rows, right):
        left = [[sum((shear[i][k] * rows[k][j] for k in range(3)), Expr.zero()) for j in range(3)] for i in range(3)]
        if not right:
            return left
        return [[sum((left[i][k] * shear[j][k] for k in range(3)), Expr.zero()) for j in range(3)] for i in range(3)]

    return FrameManifold(XYZ, conjugate(m.frame, False), conjugate(m.metric, True))


def heisenberg_contact() -> ContactStructure:
    """Lorentzian Heisenberg group: [e1, e2] = e3, xi = e3."""
    m = heisenberg_manifold()
    phi = parse_matrix([["0", "-1", "0"], ["1", "0", "0"], ["0", "0", "0"]])
    return ContactStructure.build(m, levi_civita(m), phi, FrameVectorField.of([0, 0, 1]))


def diagonal_frame_manifold(a: Fraction, b: Fraction, signs=(1, 1, -1)) -> FrameManifold:
    """``e1 = exp(a z) d/dx``, ``e2 = exp(b z) d/dy``, ``e3 = d/dz``; then [e1,e3] = -a e1, [e2,e3] = -b e2."""
    zero, one = Expr.zero(), Expr.one()
    frame = [
        [Expr.exponential({"z": a}), zero, zero],
        [zero, Expr.exponential({"z": b}), zero],
        [zero, zero, one],
    ]
    metric = [[Expr.constant(signs[i]) if i == j else zero for j in range(3)] for i in range(3)]
    return FrameManifold(XYZ, frame, metric)


def random_rational(rng, span: int = 3, denominator: int = 3, nonzero: bool = False) -> Fraction:
    while True:
        value = Fraction(rng.randint(-span, span), rng.randint(1, denominator))
        if value != 0 or not nonzero:
            return value
