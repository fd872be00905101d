"""Tests for the analysis pipeline and the orchestrator."""

import logging
import os
import shutil
import tempfile
import unittest
from fractions import Fraction

import numpy as np

from tests.helpers import example_document

from common.config.settings import SettingsManager
from common.utils.file_utils import FileUtils
from domain.errors import FlowInputError, WorkbenchError
from domain.models.flow_request import HomogeneousData
from domain.models.report_request import ReportRequest
from infrastructure.repositories.flow_input_repository import FlowInputRepository
from infrastructure.repositories.manifold_repository import ManifoldRepository
from service.orchestrator import AnalysisOrchestrator
from service.pipeline.builder import AnalysisPipelineBuilder

EXPECTED_FINDINGS = {
    "ricci",
    "lie_xi_metric_closed_form",
    "second_lie_xi_metric_closed_form",
    "theorem_lambda",
    "theorem_regime",
    "lambda_of_mu",
    "ricci_space_form_printed",
}

QUIET = logging.getLogger("tests.quiet")
QUIET.addHandler(logging.NullHandler())
QUIET.propagate = False


class PipelineTestCase(unittest.TestCase):
    def setUp(self):
        self.temp_dir = tempfile.mkdtemp()
        self.repository = ManifoldRepository(QUIET)

    def tearDown(self):
        shutil.rmtree(self.temp_dir, ignore_errors=True)

    def orchestrator(self, **kwargs):
        settings = SettingsManager(output_dir=self.temp_dir, **kwargs)
        return AnalysisOrchestrator(settings, QUIET)

    def definition(self, document=None):
        return self.repository.from_document(document or example_document(), source="example.json")


class TestSymbolicCommands(PipelineTestCase):
    def test_check_passes(self):
        request = self.orchestrator().check(self.definition())
        document = request.to_document()
        self.assertEqual(request.exit_code(), 0)
        self.assertEqual(document["verdict"], "pass")
        self.assertEqual(document["structure"]["brackets"]["e1,e3"], ["-1", "0", "0"])
        self.assertEqual(document["structure"]["axioms"]["violations"], [])
        self.assertNotIn("discrepancies", document)
        self.assertNotIn("curvature", document)

    def test_report_records_discrepancies(self):
        request = self.orchestrator().report(self.definition())
        document = request.to_document()
        self.assertEqual(request.failures, [])
        self.assertEqual({d["finding"] for d in document["discrepancies"]}, EXPECTED_FINDINGS)
        self.assertEqual(request.exit_code(), 1)
        self.assertEqual(document["verdict"], "fail")

        self.assertEqual(document["trans_sasakian"]["alpha"], "0")
        self.assertEqual(document["trans_sasakian"]["beta"], "-1")
        self.assertEqual(document["curvature"]["ricci"]["e1,e1"], "2")
        self.assertEqual(document["curvature"]["scalar"], "6")
        self.assertEqual(document["curvature"]["phi_sectional"]["c"], "1")
        self.assertEqual(document["identities"]["scope"], "full")
        self.assertTrue(document["normality"]["half"]["normal"])
        self.assertEqual(document["differential_forms"]["full"]["verdict"], "pass")

        solution = document["soliton"]["solution"]
        self.assertEqual((solution["lambda"], solution["mu"]), ("1", "2"))
        self.assertEqual(solution["classification"], "expanding")
        self.assertEqual(document["soliton"]["xi_closed_form_holds"], {"lie_xi_metric": "plus", "second_lie_xi_metric": "plus"})
        theorem = document["soliton"]["theorem"]
        self.assertEqual((theorem["lambda"], theorem["threshold"]), ("1/2", "4"))
        self.assertFalse(theorem["agrees"])

        ricci = next(d for d in document["discrepancies"] if d["finding"] == "ricci")
        self.assertEqual((ricci["index"], ricci["expected"], ricci["computed"]), ("e1,e1", "0", "2"))
        self.orchestrator().report_repository.validate(document)

    def test_report_without_reference_has_fewer_findings(self):
        document = example_document()
        del document["reference"]
        findings = {d["finding"] for d in self.orchestrator().report(self.definition(document)).discrepancies}
        self.assertEqual(findings, EXPECTED_FINDINGS - {"ricci", "lambda_of_mu"})

    def test_soliton_conformal(self):
        request = self.orchestrator().soliton(self.definition(), kind="conformal", pressure=Fraction(1))
        solution = request.sections["soliton"]["solution"]
        self.assertEqual((solution["lambda"], solution["mu"]), ("1", "17/6"))
        self.assertNotIn("identities", request.to_document())

    def test_soliton_zero_field(self):
        request = self.orchestrator().soliton(self.definition(), field="0, 0, 0")
        solution = request.sections["soliton"]["solution"]
        self.assertEqual(solution["status"], "underdetermined")
        self.assertIsNone(solution["lambda"])
        self.assertEqual(solution["mu"], "2")
        self.assertIn("skipped", request.sections["soliton"]["theorem"])

    def test_soliton_field_with_wrong_length(self):
        request = self.orchestrator().soliton(self.definition(), field="1,2")
        self.assertEqual(request.exit_code(), 2)
        self.assertEqual(request.to_document()["verdict"], "input-error")

    def test_soliton_xi_without_contact(self):
        document = example_document()
        del document["contact"]
        del document["reference"]
        request = self.orchestrator().soliton(self.definition(document))
        self.assertEqual(request.exit_code(), 2)
        self.assertIn("contact", request.input_error)

    def test_flipped_convention(self):
        request = self.orchestrator(ricci_convention="flipped").report(self.definition())
        document = request.to_document()
        self.assertEqual(document["ricci_convention"], "flipped")
        self.assertEqual(document["curvature"]["ricci"]["e3,e3"], "2")

    def test_flat_report_without_contact(self):
        document = {
            "coordinates": ["x", "y", "z"],
            "frame": [["1", "0", "0"], ["0", "1", "0"], ["0", "0", "1"]],
            "metric": [["1", "0", "0"], ["0", "1", "0"], ["0", "0", "-1"]],
        }
        request = self.orchestrator().report(self.definition(document))
        result = request.to_document()
        self.assertEqual(request.exit_code(), 0)
        self.assertEqual(result["structure"]["axioms"], {"skipped": "no contact structure in the definition"})
        self.assertEqual(result["identities"]["scope"], "structural")
        self.assertIn("skipped", result["trans_sasakian"])
        self.assertEqual(result["discrepancies"], [])

    def test_singular_frame_is_input_error(self):
        document = example_document()
        document["frame"][1] = ["exp(z)", "0", "0"]
        request = self.orchestrator().check(self.definition(document))
        self.assertEqual(request.exit_code(), 2)

    def test_axiom_violation_fails_check(self):
        document = example_document()
        document["contact"]["phi"][0][1] = "-2"
        request = self.orchestrator().check(self.definition(document))
        violations = request.sections["structure"]["axioms"]["violations"]
        self.assertEqual(request.exit_code(), 1)
        self.assertEqual(violations[0]["index"], [0, 0])

    def test_report_is_saved(self):
        orchestrator = self.orchestrator()
        path = orchestrator.path_manager.get_report_path("example")
        request = orchestrator.report(self.definition(), save_path=path)
        self.assertEqual(FileUtils.read_json_file(path), request.to_document())


class TestPipelineBuilder(unittest.TestCase):
    def test_empty_builder(self):
        with self.assertRaises(ValueError):
            AnalysisPipelineBuilder().build()

    def test_chain_runs_in_order(self):
        definition = ManifoldRepository(QUIET).example()
        request = ReportRequest(definition, "report")
        pipeline = (
            AnalysisPipelineBuilder(QUIET).add_validation().add_trans_sasakian().add_curvature().build()
        )
        pipeline.handle(request)
        self.assertEqual(list(request.sections), ["structure", "normality", "trans_sasakian", "differential_forms", "curvature"])

    def test_reset(self):
        builder = AnalysisPipelineBuilder().add_validation().reset()
        with self.assertRaises(ValueError):
            builder.build()


class TestFlowCommand(PipelineTestCase):
    def test_sweep_writes_one_file_per_scale(self):
        orchestrator = self.orchestrator(k0_scale="0,1", dt=0.01, t_max=0.2)
        summary, code = orchestrator.flow(self.definition(), check_sigma=(1.0, 2.0))
        self.assertEqual(code, 1)
        runs = {run["k0_scale"]: run for run in summary["runs"]}
        self.assertTrue(runs[1.0]["self_similar"]["within_tolerance"])
        self.assertFalse(runs[0.0]["self_similar"]["within_tolerance"])
        self.assertLessEqual(runs[0.0]["closed_form_deviation"], 1e-8)
        for scale in (0.0, 1.0):
            self.assertTrue(os.path.exists(orchestrator.path_manager.get_trajectory_path(scale)))

    def test_self_similar_run_passes(self):
        summary, code = self.orchestrator(k0_scale="1", dt=0.01, t_max=0.5).flow(self.definition(), (1.0, 2.0))
        self.assertEqual(code, 0)
        self.assertEqual(summary["verdict"], "pass")
        self.assertEqual(summary["steps"], 50)

    def test_halt_fails(self):
        summary, code = self.orchestrator(k0_scale="1", dt=0.01, t_max=2.0).flow(self.definition())
        self.assertEqual(code, 1)
        self.assertIsNotNone(summary["runs"][0]["halted"])

    def test_homogeneous_data(self):
        path = os.path.join(self.temp_dir, "constants.json")
        FileUtils.write_json_file(
            path, {"structure_constants": {"1,3": [-1, 0, 0], "2,3": [0, -1, 0]}, "metric": [[1, 0, 0], [0, 1, 0], [0, 0, -1]]}
        )
        data = FlowInputRepository(logger=QUIET).load(path)
        self.assertIsInstance(data, HomogeneousData)
        summary, code = self.orchestrator(k0_scale="1", dt=0.01, t_max=0.3, output_format="json").flow(data, (1.0, 2.0))
        self.assertEqual(code, 0)
        self.assertTrue(summary["runs"][0]["output"].endswith(".json"))

    def test_non_constant_input(self):
        document = example_document()
        document["frame"][1] = ["0", "x", "0"]
        orchestrator = self.orchestrator()
        with self.assertRaises(FlowInputError) as ctx:
            orchestrator.build_flow_problem(self.definition(document), 0.0)
        self.assertIsInstance(ctx.exception, WorkbenchError)
        summary, code = orchestrator.flow(self.definition(document))
        self.assertEqual(code, 2)
        self.assertEqual(summary["verdict"], "input-error")

    def test_degenerate_input(self):
        data = HomogeneousData(structure_constants=np.zeros((2, 2, 2)), metric=np.zeros((2, 2)))
        summary, code = self.orchestrator().flow(data)
        self.assertEqual(code, 2)
        self.assertIn("degenerate", summary["input_error"])

    def test_repeated_sweeps_match(self):
        first, _ = self.orchestrator(k0_scale="0,-0.5", dt=0.02, t_max=0.2).flow(self.definition())
        second, _ = self.orchestrator(k0_scale="0,-0.5", dt=0.02, t_max=0.2).flow(self.definition())
        self.assertEqual(FileUtils.dumps_json(first), FileUtils.dumps_json(second))


if __name__ == "__main__":
    unittest.main()
