"""Tests for frame geometry, contact structures and curvature."""

import random
import unittest
from fractions import Fraction

import numpy as np

from tests.helpers import (
    XYZ,
    diagonal_frame_manifold,
    example_contact,
    example_document,
    example_manifold,
    heisenberg_contact,
    parse_matrix,
    random_rational,
)

from domain.errors import DegenerateProbeError, ManifoldDefinitionError, TransSasakianError
from domain.geometry.contact import (
    EQ_PHI_SQUARED,
    EQ_XI_TIMELIKE,
    ContactStructure,
    attach_structure,
    collect_axiom_violations,
    extract_trans_sasakian,
    normality_tensors,
    oubina_check,
    phi_rank_check,
)
from domain.geometry.curvature import (
    compute_curvature,
    contract_model,
    identity_suite,
    phi_sectional,
    phi_sectional_on_probes,
    space_form_model,
    structural_identities,
)
from domain.geometry.flow import ricci_numeric
from domain.geometry.frame import FrameManifold, FrameVectorField, levi_civita
from domain.symbolic.expr import Expr


def nonzero_entries(table):
    return {
        (i, j, k): str(table[i][j][k])
        for i in range(3)
        for j in range(3)
        for k in range(3)
        if not table[i][j][k].is_zero()
    }


class TestFrameManifold(unittest.TestCase):
    """Brackets, Levi-Civita connection and validation."""

    def setUp(self):
        self.m = example_manifold()

    def test_brackets(self):
        self.assertEqual(nonzero_entries(self.m.structure), {(0, 2, 0): "-1", (2, 0, 0): "1", (1, 2, 1): "-1", (2, 1, 1): "1"})

    def test_connection_components(self):
        conn = levi_civita(self.m)
        self.assertEqual(
            nonzero_entries(conn.gamma),
            {(0, 0, 2): "-1", (0, 2, 0): "-1", (1, 1, 2): "-1", (1, 2, 1): "-1"},
        )

    def test_connection_follows_frame_permutation(self):
        perm = (2, 0, 1)
        doc = example_document()
        heisenberg = ([["1", "0", "0"], ["0", "1", "x"], ["0", "0", "1"]], doc["metric"])
        for frame_rows, metric_rows in ((doc["frame"], doc["metric"]), heisenberg):
            frame, metric = parse_matrix(frame_rows), parse_matrix(metric_rows)
            gamma = levi_civita(FrameManifold(XYZ, frame, metric)).gamma
            permuted = FrameManifold(
                XYZ,
                [frame[perm[i]] for i in range(3)],
                [[metric[perm[i]][perm[j]] for j in range(3)] for i in range(3)],
            )
            gamma_p = levi_civita(permuted).gamma
            for i in range(3):
                for j in range(3):
                    for k in range(3):
                        self.assertEqual(gamma_p[i][j][k], gamma[perm[i]][perm[j]][perm[k]], (frame_rows, i, j, k))

    def test_connection_is_torsion_free_and_metric(self):
        conn = levi_civita(self.m)
        self.assertTrue(conn.torsion_residuals().passed)
        self.assertTrue(conn.metric_compatibility_residuals().passed)
        self.assertTrue(self.m.jacobi_residuals().passed)

    def test_structure_is_constant(self):
        self.assertTrue(self.m.structure_is_constant())
        self.assertTrue(self.m.metric_is_constant())

    def test_singular_frame(self):
        frame = parse_matrix([["1", "1", "0"], ["1", "1", "0"], ["0", "0", "1"]])
        metric = parse_matrix([["1", "0", "0"], ["0", "1", "0"], ["0", "0", "1"]])
        with self.assertRaises(ManifoldDefinitionError):
            FrameManifold(XYZ, frame, metric)

    def test_asymmetric_metric(self):
        frame = parse_matrix([["1", "0", "0"], ["0", "1", "0"], ["0", "0", "1"]])
        metric = parse_matrix([["1", "x", "0"], ["0", "1", "0"], ["0", "0", "1"]])
        with self.assertRaises(ManifoldDefinitionError):
            FrameManifold(XYZ, frame, metric)

    def test_bracket_of_non_constant_fields(self):
        v = FrameVectorField((Expr.symbol("z"), Expr.zero(), Expr.zero()))
        w = self.m.basis(2)
        # [z e1, e3] = z[e1, e3] - e3(z) e1 = -(z + 1) e1
        self.assertEqual(self.m.bracket(v, w)[0], -(Expr.symbol("z") + 1))


class TestContactStructure(unittest.TestCase):
    """Axioms, trans-Sasakian extraction, normality and form conditions."""

    def test_example_has_no_violations(self):
        cs = example_contact()
        self.assertEqual(collect_axiom_violations(cs), [])
        self.assertEqual([str(v) for v in cs.eta], ["0", "0", "1"])

    def test_phi_of_e1_is_e2(self):
        cs = example_contact()
        self.assertEqual([str(v) for v in cs.phi_basis(0)], ["0", "1", "0"])

    def test_riemannian_metric_breaks_timelike_axiom(self):
        m = example_manifold()
        euclidean = FrameManifold(XYZ, m.frame, parse_matrix([["1", "0", "0"], ["0", "1", "0"], ["0", "0", "1"]]))
        cs = example_contact(euclidean)
        violations = collect_axiom_violations(cs)
        self.assertEqual(violations[0].equation, EQ_XI_TIMELIKE)

    def test_scaled_phi_entry_breaks_phi_squared(self):
        m = example_manifold()
        phi = parse_matrix([["0", "-2", "0"], ["1", "0", "0"], ["0", "0", "0"]])
        with self.assertRaises(Exception) as ctx:
            attach_structure(m, levi_civita(m), phi, FrameVectorField.of([0, 0, 1]))
        self.assertEqual(ctx.exception.equation, EQ_PHI_SQUARED)
        self.assertEqual(ctx.exception.indices, (0, 0))

    def test_contact_dimension_mismatch(self):
        m = example_manifold()
        with self.assertRaises(ManifoldDefinitionError):
            ContactStructure.build(m, levi_civita(m), parse_matrix([["0"]]), FrameVectorField.of([1]))

    def test_phi_rank(self):
        rank = phi_rank_check(example_contact())
        self.assertTrue(rank.passed)
        self.assertEqual(rank.rank, 2)

    def test_trans_sasakian_type(self):
        report = extract_trans_sasakian(example_contact())
        self.assertTrue(report.passed)
        self.assertTrue(report.constant)
        self.assertTrue(report.alpha.is_zero())
        self.assertEqual(report.beta, Expr.constant(-1))

    def test_degenerate_probe(self):
        cs = example_contact()
        with self.assertRaises(TransSasakianError):
            extract_trans_sasakian(cs, probe=cs.xi)

    def test_example_forms_hold_under_both_conventions(self):
        cs = example_contact()
        report = extract_trans_sasakian(cs)
        cs = cs.with_functions(report.alpha, report.beta)
        for convention in ("half", "full"):
            self.assertTrue(oubina_check(cs, convention).passed, convention)

    def test_form_check_requires_functions(self):
        with self.assertRaises(TransSasakianError):
            oubina_check(example_contact())

    def test_example_is_normal(self):
        for convention in ("half", "full"):
            self.assertTrue(normality_tensors(example_contact(), convention).vanishes)

    def test_heisenberg_normality_depends_on_convention(self):
        cs = heisenberg_contact()
        self.assertEqual(collect_axiom_violations(cs), [])
        self.assertTrue(normality_tensors(cs, "half").vanishes)
        self.assertFalse(normality_tensors(cs, "full").vanishes)
        self.assertTrue(extract_trans_sasakian(cs).beta.is_zero())

    def test_unknown_convention(self):
        with self.assertRaises(ValueError):
            normality_tensors(example_contact(), "quarter")


class TestCurvature(unittest.TestCase):
    """Curvature tensors and the identity suite on the example."""

    @classmethod
    def setUpClass(cls):
        cls.m = example_manifold()
        cls.conn = levi_civita(cls.m)
        cls.cd = compute_curvature(cls.conn)
        base = example_contact(cls.m)
        report = extract_trans_sasakian(base)
        cls.cs = base.with_functions(report.alpha, report.beta)

    def test_ricci(self):
        ric = [[str(self.cd.ric[i][j]) for j in range(3)] for i in range(3)]
        self.assertEqual(ric, [["2", "0", "0"], ["0", "2", "0"], ["0", "0", "-2"]])
        self.assertEqual(self.cd.scalar, Expr.constant(6))

    def test_flipped_trace(self):
        flipped = compute_curvature(self.conn, "flipped")
        self.assertEqual(flipped.ric[2][2], Expr.constant(2))
        with self.assertRaises(ValueError):
            compute_curvature(self.conn, "sideways")

    def test_riemann_on_xi(self):
        # R(e1, e3) e3 = (alpha^2 - beta^2) e1 = -e1
        self.assertEqual([str(v) for v in self.cd.riem[0][2][2]], ["-1", "0", "0"])

    def test_phi_sectional(self):
        result = phi_sectional_on_probes(self.cd, self.cs)
        self.assertTrue(result.constant_on_probes)
        self.assertEqual(result.c, Expr.one())
        with self.assertRaises(DegenerateProbeError):
            phi_sectional(self.cd, self.cs, self.cs.xi)

    def test_identity_suite(self):
        self.cd.c = Expr.one()
        report = identity_suite(self.m, self.conn, self.cd, self.cs)
        failing = sorted(t.identity for t in report.entries if not t.passed)
        self.assertEqual(failing, ["ricci_space_form_printed"])
        self.assertEqual(report.skipped, {})
        self.assertTrue(report.get("space_form").passed)
        self.assertTrue(report.get("second_bianchi").passed)

    def test_contracted_model_matches_ricci(self):
        model = space_form_model(self.m, self.cs, 1, 0, -1)
        contracted = contract_model(model, self.m)
        for i in range(3):
            for j in range(3):
                self.assertEqual(contracted[i][j], self.cd.ric[i][j])

    def test_random_diagonal_frames(self):
        rng = random.Random(20240601)
        for _ in range(20):
            a, b = random_rational(rng), random_rational(rng)
            signs = tuple(rng.choice([1, 2, -1]) for _ in range(3))
            m = diagonal_frame_manifold(a, b, signs)
            self.assertEqual(m.structure[0][2][0], Expr.constant(-a))
            self.assertEqual(m.structure[1][2][1], Expr.constant(-b))

            conn = levi_civita(m)
            cd = compute_curvature(conn)
            report = structural_identities(m, conn, cd)
            self.assertTrue(report.passed, (a, b, signs))

            g = np.diag([float(s) for s in signs])
            c = np.zeros((3, 3, 3))
            c[0, 2, 0], c[2, 0, 0] = -float(a), float(a)
            c[1, 2, 1], c[2, 1, 1] = -float(b), float(b)
            numeric = ricci_numeric(g, c)
            exact = np.array([[float(cd.ric[i][j].constant_value()) for j in range(3)] for i in range(3)])
            self.assertLessEqual(float(np.max(np.abs(numeric - exact))), 1e-12)

    def test_ricci_numeric_matches_example(self):
        c = np.zeros((3, 3, 3))
        c[0, 2, 0], c[2, 0, 0] = -1.0, 1.0
        c[1, 2, 1], c[2, 1, 1] = -1.0, 1.0
        g = np.diag([1.0, 1.0, -1.0])
        np.testing.assert_allclose(ricci_numeric(g, c), np.diag([2.0, 2.0, -2.0]), atol=1e-12)
        np.testing.assert_allclose(ricci_numeric(3 * g, c), np.diag([2.0, 2.0, -2.0]), atol=1e-12)
        np.testing.assert_allclose(ricci_numeric(g, np.zeros((3, 3, 3))), np.zeros((3, 3)), atol=0)

    def test_fraction_inputs(self):
        self.assertEqual(space_form_model(self.m, self.cs, Fraction(1), 0, -1).c, 1)


if __name__ == "__main__":
    unittest.main()
