"""Exact Gaussian elimination over Expr and over the rationals.

Both solvers run ``sympy.Matrix.rref``. Over Expr the pivot test is the
canonical zero test, so the first entry in a column that is not exactly zero
becomes the pivot; no magnitude-based pivoting is involved.
"""

from dataclasses import dataclass
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple

import sympy

from domain.errors import SingularMatrixError
from domain.symbolic.expr import Expr


def _exactly_zero(value) -> bool:
    return Expr.from_sympy(value).is_zero()


def _canonical_entry(value) -> sympy.Expr:
    return Expr.from_sympy(value).to_sympy()


def _rational(value) -> sympy.Rational:
    value = Fraction(value)
    return sympy.Rational(value.numerator, value.denominator)


def _fraction(value) -> Fraction:
    value = sympy.Rational(value)
    return Fraction(int(value.p), int(value.q))


def solve_expr(
    matrix: Sequence[Sequence[Expr]],
    rhs_columns: Sequence[Sequence[Expr]],
) -> List[List[Expr]]:
    """Solve ``matrix @ X = B`` exactly for a square Expr matrix.

    Args:
        matrix: n x n coefficient matrix
        rhs_columns: right-hand sides, each a length-n column

    Returns:
        Solution columns in the order of ``rhs_columns``

    Raises:
        SingularMatrixError: If a column has no nonzero pivot
    """
    n = len(matrix)
    augmented = sympy.Matrix(
        [
            [entry.to_sympy() for entry in matrix[i]] + [column[i].to_sympy() for column in rhs_columns]
            for i in range(n)
        ]
    )
    reduced, pivots = augmented.rref(iszerofunc=_exactly_zero, simplify=_canonical_entry)
    pivots = [c for c in pivots if c < n]
    if len(pivots) < n:
        missing = next(c for c in range(n) if c not in pivots)
        raise SingularMatrixError(f"Matrix is singular (no pivot in column {missing})", missing)
    return [[Expr.from_sympy(reduced[i, n + k]) for i in range(n)] for k in range(len(rhs_columns))]


def inverse_expr(matrix: Sequence[Sequence[Expr]]) -> List[List[Expr]]:
    """Exact inverse of a square Expr matrix."""
    n = len(matrix)
    identity = [[Expr.one() if i == k else Expr.zero() for i in range(n)] for k in range(n)]
    columns = solve_expr(matrix, identity)
    return [[columns[k][i] for k in range(n)] for i in range(n)]


@dataclass(frozen=True)
class RationalSolution:
    """Outcome of an exact rational linear solve.

    ``values[i]`` is set only for unknowns fixed by the system regardless of
    the free ones. ``null_space`` spans the homogeneous solutions.
    """

    status: str  # unique | underdetermined | inconsistent
    values: Tuple[Optional[Fraction], ...]
    particular: Tuple[Fraction, ...]
    null_space: Tuple[Tuple[Fraction, ...], ...]
    rank: int


def solve_rational(
    rows: Sequence[Sequence[Fraction]],
    rhs: Sequence[Fraction],
    n_unknowns: int,
) -> RationalSolution:
    """Solve an over- or under-determined rational system ``rows @ x = rhs``."""
    if not rows:
        zeros = tuple(Fraction(0) for _ in range(n_unknowns))
        basis = tuple(
            tuple(Fraction(int(i == k)) for i in range(n_unknowns)) for k in range(n_unknowns)
        )
        return RationalSolution("underdetermined", (None,) * n_unknowns, zeros, basis, 0)

    coefficients = sympy.Matrix([[_rational(v) for v in row] for row in rows])
    target = sympy.Matrix([_rational(b) for b in rhs])
    reduced, pivots = coefficients.row_join(target).rref()
    if n_unknowns in pivots:
        return RationalSolution("inconsistent", (None,) * n_unknowns, (), (), len(pivots) - 1)

    free = [c for c in range(n_unknowns) if c not in pivots]
    particular = [Fraction(0)] * n_unknowns
    values: List[Optional[Fraction]] = [None] * n_unknowns
    for r, c in enumerate(pivots):
        particular[c] = _fraction(reduced[r, n_unknowns])
        if all(reduced[r, f] == 0 for f in free):
            values[c] = particular[c]

    null_space = tuple(
        tuple(_fraction(v) for v in vector) for vector in coefficients.nullspace()
    )
    status = "unique" if not free else "underdetermined"
    return RationalSolution(status, tuple(values), tuple(particular), null_space, len(pivots))


def least_squares_rational(
    rows: Sequence[Sequence[Fraction]],
    rhs: Sequence[Fraction],
    n_unknowns: int,
) -> Tuple[Fraction, ...]:
    """Exact least-squares fit via the normal equations; free unknowns are 0."""
    if not rows:
        return tuple(Fraction(0) for _ in range(n_unknowns))
    a = sympy.Matrix([[_rational(v) for v in row] for row in rows])
    b = sympy.Matrix([_rational(v) for v in rhs])
    normal, target = a.T * a, a.T * b
    return solve_rational(
        [[_fraction(normal[i, j]) for j in range(n_unknowns)] for i in range(n_unknowns)],
        [_fraction(target[i]) for i in range(n_unknowns)],
        n_unknowns,
    ).particular
