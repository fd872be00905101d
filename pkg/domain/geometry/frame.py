"""Manifolds presented by a frame: brackets, metric inverse, Levi-Civita.

Index convention: ``gamma[i][j][k]`` multiplies ``e_k`` in
``nabla_{e_i} e_j`` (derivative direction first). Frame indices are
0-based in code and printed 1-based (``e1``...).
"""

from dataclasses import dataclass
from typing import Iterator, List, Sequence, Tuple, Union

from domain.errors import ManifoldDefinitionError, SingularMatrixError
from domain.geometry.residuals import ResidualTable
from domain.symbolic.expr import Coordinate, Expr, Scalar
from domain.symbolic.linalg import inverse_expr, solve_expr

Matrix = Tuple[Tuple[Expr, ...], ...]


@dataclass(frozen=True, eq=False)
class FrameVectorField:
    """``V = sum_i components[i] * e_i``."""

    components: Tuple[Expr, ...]

    @classmethod
    def of(cls, values: Sequence[Union[Expr, Scalar]]) -> "FrameVectorField":
        return cls(tuple(Expr.coerce(v) for v in values))

    @classmethod
    def basis(cls, dimension: int, index: int) -> "FrameVectorField":
        return cls(tuple(Expr.one() if i == index else Expr.zero() for i in range(dimension)))

    @classmethod
    def zero(cls, dimension: int) -> "FrameVectorField":
        return cls(tuple(Expr.zero() for _ in range(dimension)))

    def __len__(self) -> int:
        return len(self.components)

    def __getitem__(self, index: int) -> Expr:
        return self.components[index]

    def __iter__(self) -> Iterator[Expr]:
        return iter(self.components)

    def __add__(self, other: "FrameVectorField") -> "FrameVectorField":
        return FrameVectorField(tuple(a + b for a, b in zip(self, other)))

    def __sub__(self, other: "FrameVectorField") -> "FrameVectorField":
        return FrameVectorField(tuple(a - b for a, b in zip(self, other)))

    def __neg__(self) -> "FrameVectorField":
        return FrameVectorField(tuple(-a for a in self))

    def scale(self, factor: Union[Expr, Scalar]) -> "FrameVectorField":
        factor = Expr.coerce(factor)
        return FrameVectorField(tuple(factor * a for a in self))

    def is_zero(self) -> bool:
        return all(a.is_zero() for a in self)

    def __str__(self) -> str:
        return "[" + ", ".join(str(a) for a in self) + "]"


def linear_combination(
    terms: Sequence[Tuple[Union[Expr, Scalar], FrameVectorField]], dimension: int
) -> FrameVectorField:
    result = FrameVectorField.zero(dimension)
    for factor, field_ in terms:
        factor = Expr.coerce(factor)
        if not factor.is_zero():
            result = result + field_.scale(factor)
    return result


class FrameManifold:
    """Coordinates, frame coefficient matrix and frame metric.

    Row ``i`` of ``frame`` gives ``e_i = sum_mu frame[i][mu] d/dx^mu``.
    Structure functions satisfy ``[e_i, e_j] = sum_k structure[i][j][k] e_k``.
    """

    def __init__(
        self,
        coordinates: Sequence[Union[str, Coordinate]],
        frame: Sequence[Sequence[Expr]],
        metric: Sequence[Sequence[Expr]],
    ):
        self.coordinates: Tuple[Coordinate, ...] = tuple(
            c if isinstance(c, Coordinate) else Coordinate(c) for c in coordinates
        )
        self.dimension = len(self.coordinates)
        self._validate_shapes(frame, metric)

        self.frame: Matrix = tuple(tuple(Expr.coerce(v) for v in row) for row in frame)
        self.metric: Matrix = tuple(tuple(Expr.coerce(v) for v in row) for row in metric)
        self._validate_metric_symmetry()

        try:
            self.frame_inverse: Matrix = tuple(tuple(r) for r in inverse_expr(self.frame))
        except SingularMatrixError as e:
            raise ManifoldDefinitionError(f"Singular frame matrix: {e}") from e
        try:
            self.metric_inverse: Matrix = tuple(tuple(r) for r in inverse_expr(self.metric))
        except SingularMatrixError as e:
            raise ManifoldDefinitionError(f"Singular metric: {e}") from e

        self.structure = self._structure_functions()
        self._verify()

    # construction ---------------------------------------------------------

    def _validate_shapes(self, frame, metric):
        d = self.dimension
        if d == 0:
            raise ManifoldDefinitionError("At least one coordinate is required")
        names = [c.name for c in self.coordinates]
        if len(set(names)) != d:
            raise ManifoldDefinitionError(f"Duplicate coordinate names: {names}")
        for label, matrix in (("frame", frame), ("metric", metric)):
            if len(matrix) != d or any(len(row) != d for row in matrix):
                raise ManifoldDefinitionError(f"{label} must be a {d}x{d} matrix")

    def _validate_metric_symmetry(self):
        for i in range(self.dimension):
            for j in range(i + 1, self.dimension):
                if not (self.metric[i][j] - self.metric[j][i]).is_zero():
                    raise ManifoldDefinitionError(f"Asymmetric metric at ({i}, {j})")

    def _structure_functions(self) -> List[List[List[Expr]]]:
        d = self.dimension
        names = [c.name for c in self.coordinates]
        pairs = [(i, j) for i in range(d) for j in range(i + 1, d)]
        # coordinate components of [e_i, e_j]
        columns = []
        for i, j in pairs:
            column = []
            for nu in range(d):
                value = Expr.zero()
                for mu, name in enumerate(names):
                    value = value + self.frame[i][mu] * self.frame[j][nu].differentiate(name)
                    value = value - self.frame[j][mu] * self.frame[i][nu].differentiate(name)
                column.append(value)
            columns.append(column)

        transpose = [[self.frame[mu][nu] for mu in range(d)] for nu in range(d)]
        solutions = solve_expr(transpose, columns) if columns else []

        structure = [[[Expr.zero() for _ in range(d)] for _ in range(d)] for _ in range(d)]
        for (i, j), solution in zip(pairs, solutions):
            for k in range(d):
                structure[i][j][k] = solution[k]
                structure[j][i][k] = -solution[k]
        return structure

    def _verify(self):
        d = self.dimension
        for i in range(d):
            for j in range(d):
                product = Expr.zero()
                for k in range(d):
                    product = product + self.metric[i][k] * self.metric_inverse[k][j]
                if not (product - (1 if i == j else 0)).is_zero():
                    raise ManifoldDefinitionError(f"Metric inverse check failed at ({i}, {j})")
                for k in range(d):
                    if not (self.structure[i][j][k] + self.structure[j][i][k]).is_zero():
                        raise ManifoldDefinitionError(
                            f"Structure functions not antisymmetric at ({i}, {j}, {k})"
                        )

    # vector calculus ------------------------------------------------------

    def basis(self, index: int) -> FrameVectorField:
        return FrameVectorField.basis(self.dimension, index)

    def zero_field(self) -> FrameVectorField:
        return FrameVectorField.zero(self.dimension)

    def directional_derivative(self, f: Expr, index: int) -> Expr:
        """``e_i(f) = sum_mu frame[i][mu] * df/dx^mu``."""
        result = Expr.zero()
        for mu, coordinate in enumerate(self.coordinates):
            coefficient = self.frame[index][mu]
            if not coefficient.is_zero():
                result = result + coefficient * f.differentiate(coordinate)
        return result

    def apply(self, field_: FrameVectorField, f: Expr) -> Expr:
        """``V(f)`` for a frame-component vector field."""
        result = Expr.zero()
        for i, component in enumerate(field_):
            if not component.is_zero():
                result = result + component * self.directional_derivative(f, i)
        return result

    def inner(self, v: FrameVectorField, w: FrameVectorField) -> Expr:
        result = Expr.zero()
        for i in range(self.dimension):
            if v[i].is_zero():
                continue
            for j in range(self.dimension):
                if not w[j].is_zero():
                    result = result + v[i] * self.metric[i][j] * w[j]
        return result

    def bracket(self, v: FrameVectorField, w: FrameVectorField) -> FrameVectorField:
        """``[V, W]^k = V(w^k) - W(v^k) + sum_ij v^i w^j c[i][j][k]``."""
        d = self.dimension
        components = []
        for k in range(d):
            value = self.apply(v, w[k]) - self.apply(w, v[k])
            for i in range(d):
                if v[i].is_zero():
                    continue
                for j in range(d):
                    if not w[j].is_zero():
                        value = value + v[i] * w[j] * self.structure[i][j][k]
            components.append(value)
        return FrameVectorField(tuple(components))

    def structure_is_constant(self) -> bool:
        """True when every structure function has vanishing partials."""
        return all(
            self.structure[i][j][k].differentiate(c).is_zero()
            for i in range(self.dimension)
            for j in range(self.dimension)
            for k in range(self.dimension)
            for c in self.coordinates
        )

    def metric_is_constant(self) -> bool:
        return all(entry.is_constant() for row in self.metric for entry in row)

    def jacobi_residuals(self) -> ResidualTable:
        table = ResidualTable("jacobi", "all frame triples i<j<k")
        d = self.dimension
        for i in range(d):
            for j in range(i + 1, d):
                for k in range(j + 1, d):
                    ei, ej, ek = self.basis(i), self.basis(j), self.basis(k)
                    total = (
                        self.bracket(ei, self.bracket(ej, ek))
                        + self.bracket(ej, self.bracket(ek, ei))
                        + self.bracket(ek, self.bracket(ei, ej))
                    )
                    table.record((i, j, k), total)
        return table


class Connection:
    """Affine connection by frame coefficients ``gamma[i][j][k]``."""

    def __init__(self, manifold: FrameManifold, gamma: Sequence[Sequence[Sequence[Expr]]]):
        self.manifold = manifold
        self.gamma = tuple(tuple(tuple(row) for row in block) for block in gamma)

    def covariant_derivative(self, index: int, field_: FrameVectorField) -> FrameVectorField:
        """``nabla_{e_i} V`` with Leibniz on non-constant components."""
        m = self.manifold
        d = m.dimension
        components = []
        for k in range(d):
            value = m.directional_derivative(field_[k], index)
            for j in range(d):
                if not field_[j].is_zero():
                    value = value + field_[j] * self.gamma[index][j][k]
            components.append(value)
        return FrameVectorField(tuple(components))

    def along(self, direction: FrameVectorField, field_: FrameVectorField) -> FrameVectorField:
        """``nabla_X V`` for a general direction ``X``."""
        return linear_combination(
            [
                (direction[i], self.covariant_derivative(i, field_))
                for i in range(self.manifold.dimension)
                if not direction[i].is_zero()
            ],
            self.manifold.dimension,
        )

    def torsion_residuals(self) -> ResidualTable:
        m = self.manifold
        table = ResidualTable("torsion_free", "all frame triples")
        for i in range(m.dimension):
            for j in range(m.dimension):
                for k in range(m.dimension):
                    table.record(
                        (i, j, k),
                        self.gamma[i][j][k] - self.gamma[j][i][k] - m.structure[i][j][k],
                    )
        return table

    def metric_compatibility_residuals(self) -> ResidualTable:
        m = self.manifold
        d = m.dimension
        table = ResidualTable("metric_compatible", "all frame triples")
        for i in range(d):
            for j in range(d):
                for k in range(d):
                    value = m.directional_derivative(m.metric[j][k], i)
                    for l in range(d):
                        value = value - self.gamma[i][j][l] * m.metric[l][k]
                        value = value - self.gamma[i][k][l] * m.metric[j][l]
                    table.record((i, j, k), value)
        return table


# ---------------------------------------------------------------------------
# operations
# ---------------------------------------------------------------------------


def build_manifold(
    coords: Sequence[Union[str, Coordinate]],
    frame_matrix: Sequence[Sequence[Expr]],
    metric: Sequence[Sequence[Expr]],
) -> FrameManifold:
    return FrameManifold(coords, frame_matrix, metric)


def directional_derivative(m: FrameManifold, f: Expr, i: int) -> Expr:
    return m.directional_derivative(f, i)


def levi_civita(m: FrameManifold) -> Connection:
    """Levi-Civita connection from the six-term Koszul formula.

    ``2 g(nabla_X Y, Z) = X g(Y,Z) + Y g(X,Z) - Z g(Y,X)
    - g(X,[Y,Z]) - g(Y,[X,Z]) + g(Z,[X,Y])`` on frame triples, then
    contracted with the inverse metric.
    """
    d = m.dimension
    g, c = m.metric, m.structure

    def g_bracket(a: int, b: int, e: int) -> Expr:
        # g(e_a, [e_b, e_e])
        value = Expr.zero()
        for l in range(d):
            value = value + c[b][e][l] * g[a][l]
        return value

    koszul = [[[Expr.zero()] * d for _ in range(d)] for _ in range(d)]
    for i in range(d):
        for j in range(d):
            for k in range(d):
                koszul[i][j][k] = (
                    m.directional_derivative(g[j][k], i)
                    + m.directional_derivative(g[i][k], j)
                    - m.directional_derivative(g[j][i], k)
                    - g_bracket(i, j, k)
                    - g_bracket(j, i, k)
                    + g_bracket(k, i, j)
                )

    gamma = [[[Expr.zero()] * d for _ in range(d)] for _ in range(d)]
    for i in range(d):
        for j in range(d):
            for k in range(d):
                value = Expr.zero()
                for l in range(d):
                    value = value + m.metric_inverse[k][l] * koszul[i][j][l]
                gamma[i][j][k] = value / 2
    return Connection(m, gamma)


def covariant_derivative(conn: Connection, i: int, v: FrameVectorField) -> FrameVectorField:
    return conn.covariant_derivative(i, v)


def bracket_fields(m: FrameManifold, v: FrameVectorField, w: FrameVectorField) -> FrameVectorField:
    return m.bracket(v, w)
