"""Tests for Lie derivatives, the soliton solver and the closed-form thresholds."""

import random
import unittest
from fractions import Fraction

from tests.helpers import (
    diagonal_frame_manifold,
    example_contact,
    example_manifold,
    heisenberg_manifold,
    random_rational,
    sheared_frame_manifold,
)

from domain.errors import ThresholdHypothesisError
from domain.geometry.curvature import compute_curvature
from domain.geometry.frame import FrameVectorField, levi_civita
from domain.geometry.soliton import (
    SolitonKind,
    SolitonProblem,
    SolveStatus,
    classify,
    eta_einstein_fit,
    lie_derivative_metric,
    second_lie_derivative_metric,
    solve,
    theorem_thresholds,
    xi_closed_form_checks,
)
from domain.symbolic.expr import Expr

XI = FrameVectorField.of([0, 0, 1])


def diagonal(matrix):
    return [str(matrix[i][i]) for i in range(len(matrix))]


def off_diagonal_zero(matrix):
    d = len(matrix)
    return all(matrix[i][j].is_zero() for i in range(d) for j in range(d) if i != j)


class TestLieDerivatives(unittest.TestCase):
    def setUp(self):
        self.m = example_manifold()
        self.conn = levi_civita(self.m)

    def test_lie_derivative_along_xi(self):
        h = lie_derivative_metric(self.m, self.conn, XI)
        self.assertEqual(diagonal(h), ["-2", "-2", "0"])
        self.assertTrue(off_diagonal_zero(h))

    def test_second_lie_derivative_along_xi(self):
        h2 = second_lie_derivative_metric(self.m, self.conn, XI)
        self.assertEqual(diagonal(h2), ["4", "4", "0"])
        self.assertTrue(off_diagonal_zero(h2))

    def test_e1_is_not_killing(self):
        h = lie_derivative_metric(self.m, self.conn, self.m.basis(0))
        self.assertEqual(h[0][2], Expr.one())

    def test_random_homogeneous_structures(self):
        rng = random.Random(7)
        unique = 0

        def checked(m, field):
            nonlocal unique
            conn = levi_civita(m)
            solution = solve(SolitonProblem(m, conn, compute_curvature(conn).ric, field))
            if solution.status is SolveStatus.UNIQUE:
                unique += 1
                self.assertTrue(solution.residuals.passed, [[str(v) for v in row] for row in m.frame])
            return solution

        for case in range(10):
            # even cases are symmetric in e1, e2, which makes the solve unique
            symmetric = case % 2 == 0
            a = random_rational(rng, nonzero=True)
            b = a if symmetric else random_rational(rng)
            signs = tuple(rng.choice([1, 3, -1, -2]) for _ in range(3))
            if symmetric:
                signs = (signs[0], signs[0], signs[2])
            m = diagonal_frame_manifold(a, b, signs)
            conn = levi_civita(m)
            h = lie_derivative_metric(m, conn, XI)
            h2 = second_lie_derivative_metric(m, conn, XI)
            expected_h = [-2 * a * signs[0], -2 * b * signs[1], 0]
            expected_h2 = [4 * a * a * signs[0], 4 * b * b * signs[1], 0]
            self.assertEqual([h[i][i] for i in range(3)], [Expr.constant(v) for v in expected_h])
            self.assertEqual([h2[i][i] for i in range(3)], [Expr.constant(v) for v in expected_h2])
            self.assertTrue(off_diagonal_zero(h))
            diagonal_solution = checked(m, XI)

            # in the frame e1 + s e3, e2, e3 the bracket [e1', e2] = s b e2 is off-diagonal
            sheared = sheared_frame_manifold(m, random_rational(rng, nonzero=True))
            sheared_solution = checked(sheared, XI)
            self.assertIs(sheared_solution.status, diagonal_solution.status)
            self.assertEqual((sheared_solution.lam, sheared_solution.mu), (diagonal_solution.lam, diagonal_solution.mu))

            p, q, r = (random_rational(rng, nonzero=True) for _ in range(3))
            checked(heisenberg_manifold(p, q, r), FrameVectorField.of([random_rational(rng) for _ in range(3)]))

        self.assertGreaterEqual(unique, 10)


class TestSolitonSolve(unittest.TestCase):
    @classmethod
    def setUpClass(cls):
        cls.m = example_manifold()
        cls.conn = levi_civita(cls.m)
        cls.ric = compute_curvature(cls.conn).ric
        cls.eta = example_contact(cls.m).eta

    def test_hyperbolic_along_xi(self):
        solution = solve(SolitonProblem(self.m, self.conn, self.ric, XI), self.eta)
        self.assertIs(solution.status, SolveStatus.UNIQUE)
        self.assertEqual((solution.lam, solution.mu), (Fraction(1), Fraction(2)))
        self.assertEqual(solution.classification, "expanding")
        self.assertTrue(solution.residuals.passed)
        self.assertEqual(len(solution.equations), 6)

    def test_conformal_along_xi(self):
        problem = SolitonProblem(self.m, self.conn, self.ric, XI, SolitonKind.CONFORMAL, Fraction(1))
        self.assertEqual(problem.offset, Fraction(5, 3))
        solution = solve(problem)
        self.assertEqual((solution.lam, solution.mu), (Fraction(1), Fraction(17, 6)))
        data = solution.to_dict()
        self.assertEqual(data["pressure"], "1")
        self.assertEqual(data["dimension"], 3)

    def test_zero_field_leaves_lambda_free(self):
        zero = FrameVectorField.zero(3)
        solution = solve(SolitonProblem(self.m, self.conn, self.ric, zero))
        self.assertIs(solution.status, SolveStatus.UNDERDETERMINED)
        self.assertIsNone(solution.lam)
        self.assertEqual(solution.mu, Fraction(2))
        self.assertEqual(solution.classification, "n/a")
        self.assertEqual(solution.to_dict()["null_space"], [["1", "0"]])

    def test_pressure_only_for_conformal(self):
        with self.assertRaises(ValueError):
            SolitonProblem(self.m, self.conn, self.ric, XI, SolitonKind.HYPERBOLIC, Fraction(1))
        with self.assertRaises(ValueError):
            SolitonProblem(self.m, self.conn, self.ric, XI, SolitonKind.CONFORMAL)
        with self.assertRaises(ValueError):
            SolitonProblem(self.m, self.conn, self.ric, XI, dimension=5)

    def test_eta_einstein_fit(self):
        fit = eta_einstein_fit(self.ric, self.m.metric, self.eta)
        self.assertEqual((fit.a, fit.b), (Fraction(2), Fraction(0)))
        self.assertTrue(fit.exact)

    def test_closed_forms_hold_with_plus_sign(self):
        h = lie_derivative_metric(self.m, self.conn, XI)
        h2 = second_lie_derivative_metric(self.m, self.conn, XI)
        tables = {t.identity: t.passed for t in xi_closed_form_checks(example_contact(self.m), -1, h, h2)}
        self.assertEqual(
            tables,
            {
                "lie_xi_metric_minus_eta_eta": False,
                "lie_xi_metric_plus_eta_eta": True,
                "second_lie_xi_metric_minus_eta_eta": False,
                "second_lie_xi_metric_plus_eta_eta": True,
            },
        )

    def test_classify(self):
        self.assertEqual(classify(Fraction(-1)), "shrinking")
        self.assertEqual(classify(Fraction(0)), "steady")
        self.assertEqual(classify(None), "n/a")


class TestThresholds(unittest.TestCase):
    def test_example_thresholds_disagree(self):
        result = theorem_thresholds(0, -1, 1, 2)
        self.assertEqual(result.lam, Fraction(1, 2))
        self.assertEqual(result.threshold, Fraction(4))
        self.assertEqual(result.regime, "shrinking")
        self.assertEqual(result.formula_regime, "expanding")
        self.assertFalse(result.agrees)

    def test_threshold_identity_on_random_tuples(self):
        # 4 beta lambda = mu - threshold, so both readings agree iff beta > 0 or lambda = 0
        rng = random.Random(11)
        for _ in range(50):
            alpha = random_rational(rng)
            beta = random_rational(rng, nonzero=True)
            mu = random_rational(rng, span=6)
            n = rng.randint(1, 4)
            conformal = rng.random() < 0.5
            kind = SolitonKind.CONFORMAL if conformal else SolitonKind.HYPERBOLIC
            p = random_rational(rng) if conformal else None
            result = theorem_thresholds(alpha, beta, n, mu, p, kind)
            self.assertEqual(4 * beta * result.lam, mu - result.threshold)
            self.assertEqual(result.agrees, beta > 0 or result.lam == 0)

    def test_zero_beta(self):
        with self.assertRaises(ThresholdHypothesisError):
            theorem_thresholds(1, 0, 1, 2)

    def test_conformal_needs_pressure(self):
        with self.assertRaises(ValueError):
            theorem_thresholds(0, -1, 1, 2, kind=SolitonKind.CONFORMAL)


if __name__ == "__main__":
    unittest.main()
