"""Tests for the exact expression engine, parser and linear algebra."""

import random
import unittest
from fractions import Fraction

import sympy

from tests.helpers import XYZ

from domain.errors import (
    EvaluationError,
    ExpressionParseError,
    ManifoldDefinitionError,
    NonConstantError,
    SingularMatrixError,
    SymbolicZeroDivisionError,
    UnknownSymbolError,
)
from domain.symbolic.expr import ArithmeticOp, Coordinate, Expr, arithmetic, normalize
from domain.symbolic.linalg import inverse_expr, least_squares_rational, solve_expr, solve_rational
from domain.symbolic.parser import ExpressionParser, parse


def p(text):
    return parse(text, XYZ)


class TestExpr(unittest.TestCase):
    """Canonical form, arithmetic and calculus."""

    def test_exponentials_cancel(self):
        value = p("exp(z)*exp(-z)")
        self.assertTrue(value.is_constant())
        self.assertEqual(value.constant_value(), 1)

    def test_semantic_equality_across_fractions(self):
        self.assertEqual(p("(x^2 - 1)/(x - 1)"), p("x + 1"))
        self.assertNotEqual(p("x"), p("y"))

    def test_differentiate_exponential(self):
        self.assertEqual(p("exp(2*z)").differentiate("z"), p("2*exp(2*z)"))
        self.assertTrue(p("exp(2*z)").differentiate("x").is_zero())

    def test_quotient_rule(self):
        self.assertEqual(p("1/x").differentiate("x"), p("-1/x^2"))

    def test_printed_form_parses_back(self):
        for text in ("exp(z)", "-2*x*exp(-z) + 1/3", "(x + y)/(x - y)", "x^2*y"):
            value = p(text)
            self.assertTrue(p(str(value)).same_form(value), text)

    def test_zero_prints_as_zero(self):
        self.assertEqual(str(p("x - x")), "0")

    def test_evaluate(self):
        self.assertAlmostEqual(p("x*exp(z)").evaluate({"x": 2.0, "z": 0.0}), 2.0)
        with self.assertRaises(EvaluationError):
            p("x + y").evaluate({"x": 1.0})
        with self.assertRaises(EvaluationError):
            p("1/x").evaluate({"x": 0.0})

    def test_evaluate_rational(self):
        self.assertEqual(p("x/3 + exp(z)").evaluate_rational({"x": 1, "z": 0}), Fraction(4, 3))
        with self.assertRaises(EvaluationError):
            p("exp(z)").evaluate_rational({"z": 1})

    def test_division_by_zero_expression(self):
        with self.assertRaises(SymbolicZeroDivisionError):
            p("x") / Expr.zero()

    def test_constant_value_of_non_constant(self):
        with self.assertRaises(NonConstantError):
            p("x").constant_value()

    def test_reserved_coordinate(self):
        with self.assertRaises(ManifoldDefinitionError):
            Coordinate("exp")
        with self.assertRaises(ManifoldDefinitionError):
            Coordinate("1x")

    def test_arithmetic_surface(self):
        x = p("x")
        self.assertEqual(arithmetic(x, 2, ArithmeticOp.INT_POW), x * x)
        self.assertEqual(arithmetic(x, None, ArithmeticOp.NEG), -x)
        self.assertEqual(arithmetic(x, 2, ArithmeticOp.DIV), p("x/2"))

    def test_normalize_is_idempotent(self):
        value = p("(x*exp(z) + 2)/(3*x)")
        self.assertTrue(normalize(value).same_form(value))

    def test_rational_exponential_rates(self):
        self.assertEqual(p("exp(z/2)^2"), p("exp(z)"))
        self.assertEqual(str(p("(exp(2*z) - 1)/(exp(z) - 1)")), "exp(z) + 1")
        self.assertEqual(str(p("exp(z/3)*exp(-z/2)")), "exp(-1/6*z)")

    def test_from_sympy(self):
        x, z = sympy.symbols("x z")
        self.assertTrue(Expr.from_sympy(x * sympy.exp(z) / x).same_form(p("exp(z)")))
        with self.assertRaises(ManifoldDefinitionError):
            Expr.from_sympy(sympy.sin(x))
        with self.assertRaises(ManifoldDefinitionError):
            Expr.from_sympy(sympy.exp(x * z))


class TestParser(unittest.TestCase):
    """Grammar acceptance and error positions."""

    def test_rationals_and_powers(self):
        self.assertEqual(p("1/2").constant_value(), Fraction(1, 2))
        self.assertEqual(p("x^-1"), p("1/x"))
        self.assertEqual(p("-(x - y)"), p("y - x"))

    def test_unknown_symbol(self):
        with self.assertRaises(UnknownSymbolError) as ctx:
            p("x + w")
        self.assertEqual(ctx.exception.position, 4)

    def test_rejected_inputs(self):
        for text in ("", "x +", "1/0", "x^(1/2)", "exp(x*y)", "exp(z + 1)", "x $ y", "(x"):
            with self.assertRaises(ExpressionParseError, msg=text):
                p(text)

    def test_duplicate_coordinates(self):
        with self.assertRaises(ExpressionParseError):
            ExpressionParser(["x", "x"])


class TestLinalg(unittest.TestCase):
    """Exact Gaussian elimination."""

    def test_unique_solution(self):
        solution = solve_rational([[1, 1], [1, -1]], [3, 1], 2)
        self.assertEqual(solution.status, "unique")
        self.assertEqual(solution.values, (Fraction(2), Fraction(1)))

    def test_inconsistent_system(self):
        solution = solve_rational([[1, 0], [1, 0]], [1, 2], 2)
        self.assertEqual(solution.status, "inconsistent")

    def test_underdetermined_keeps_fixed_unknowns(self):
        solution = solve_rational([[0, -2]], [-4], 2)
        self.assertEqual(solution.status, "underdetermined")
        self.assertEqual(solution.values, (None, Fraction(2)))
        self.assertEqual(solution.null_space, ((Fraction(1), Fraction(0)),))

    def test_inverse_of_exponential_frame(self):
        matrix = [[p("exp(z)"), Expr.zero()], [Expr.zero(), Expr.one()]]
        inverse = inverse_expr(matrix)
        self.assertEqual(inverse[0][0], p("exp(-z)"))
        self.assertTrue(inverse[0][1].is_zero())

    def test_singular_matrix(self):
        matrix = [[p("x"), p("x")], [Expr.one(), Expr.one()]]
        with self.assertRaises(SingularMatrixError) as ctx:
            solve_expr(matrix, [[Expr.one(), Expr.one()]])
        self.assertEqual(ctx.exception.column, 1)

    def test_least_squares(self):
        self.assertEqual(least_squares_rational([[1], [1]], [1, 3], 1), (Fraction(2),))

    def test_null_space_basis(self):
        solution = solve_rational([[1, 2, 3]], [6], 3)
        self.assertEqual(solution.rank, 1)
        self.assertEqual(solution.particular, (Fraction(6), Fraction(0), Fraction(0)))
        self.assertEqual(
            solution.null_space,
            ((Fraction(-2), Fraction(1), Fraction(0)), (Fraction(-3), Fraction(0), Fraction(1))),
        )

    def test_solve_with_exponential_entries(self):
        matrix = [[p("exp(z)"), p("x")], [Expr.zero(), p("exp(-z)")]]
        (column,) = solve_expr(matrix, [[p("x"), Expr.one()]])
        self.assertEqual(column[1], p("exp(z)"))
        self.assertEqual(column[0], p("x*exp(-z) - x"))


POOL = ("x", "y", "z", "exp(z)", "exp(-x)", "exp(y/2)", "x*y", "x^2 - 1", "2", "-1/3")
OPS = (ArithmeticOp.ADD, ArithmeticOp.SUB, ArithmeticOp.MUL)


def random_expr(rng, depth=2):
    """Random exponential polynomial built from ``POOL``."""
    if depth == 0:
        return p(rng.choice(POOL))
    return arithmetic(random_expr(rng, depth - 1), random_expr(rng, depth - 1), rng.choice(OPS))


def random_fraction(rng):
    numerator, denominator = random_expr(rng), random_expr(rng, depth=1)
    if denominator.is_zero():
        return numerator
    return numerator / denominator


class TestExprProperties(unittest.TestCase):
    """Seeded algebraic laws over random expressions."""

    CASES = 40

    def setUp(self):
        self.rng = random.Random(3)

    def test_mixed_partials_commute(self):
        for _ in range(self.CASES):
            f = random_fraction(self.rng)
            u, v = self.rng.sample(XYZ, 2)
            self.assertEqual(f.differentiate(u).differentiate(v), f.differentiate(v).differentiate(u), str(f))

    def test_distributive_law(self):
        for _ in range(self.CASES):
            a, b, c = (random_fraction(self.rng) for _ in range(3))
            self.assertTrue((a * (b + c) - a * b - a * c).is_zero(), (str(a), str(b), str(c)))

    def test_division_undoes_multiplication(self):
        for _ in range(self.CASES):
            a, b = random_fraction(self.rng), random_fraction(self.rng)
            if b.is_zero():
                continue
            self.assertTrue(((a / b) * b - a).is_zero(), (str(a), str(b)))

    def test_evaluate_is_a_ring_homomorphism(self):
        for _ in range(self.CASES):
            a, b = random_expr(self.rng), random_expr(self.rng)
            point = {name: self.rng.uniform(-1.0, 1.0) for name in XYZ}
            va, vb = a.evaluate(point), b.evaluate(point)
            for combined, expected in ((a + b, va + vb), (a * b, va * vb)):
                self.assertAlmostEqual(
                    combined.evaluate(point), expected, delta=1e-10 * max(1.0, abs(expected))
                )


if __name__ == "__main__":
    unittest.main()
