"""Discrepancy handler - Step 6: compare declared reference values with computed ones."""

import re

from domain.errors import EvaluationError, ExpressionParseError
from domain.models.report_request import ReportRequest
from domain.symbolic.parser import ExpressionParser, parse
from service.pipeline.handlers.base_handler import AnalysisHandler

_PAIR = re.compile(r"^e(\d+),e(\d+)$")


class DiscrepancyHandler(AnalysisHandler):
    """
    Audits the optional ``reference`` block of a definition. Each declared
    value that differs from the computed one becomes a discrepancy entry.
    Declared values that cannot be compared (missing upstream result) are
    left out.
    """

    def handle(self, request: ReportRequest) -> ReportRequest:
        """
        Compare reference values.

        Args:
            request: Report request

        Returns:
            Request with discrepancies recorded
        """
        if not request.is_valid():
            return request

        reference = request.definition.reference or {}
        if not reference:
            return self._call_next(request)

        try:
            parser = ExpressionParser(request.manifold.coordinates)
            self._compare_tables(request, reference, parser)
            self._compare_scalars(request, reference, parser)
            self._compare_lambda_relation(request, reference)
        except ExpressionParseError as e:
            request.mark_input_error(f"{request.definition.source}: reference: {e}")
        if not request.is_valid():
            return request

        self.logger.debug(f"Reference audit: {len(request.discrepancies)} discrepancy(ies)")
        return self._call_next(request)

    def _compare_tables(self, request: ReportRequest, reference: dict, parser: ExpressionParser):
        curvature = request.curvature
        tables = {
            "ricci": curvature.ric if curvature is not None else None,
            "lie_derivative_metric": request.values.get("lie_xi"),
            "second_lie_derivative_metric": request.values.get("second_lie_xi"),
        }
        d = request.manifold.dimension
        for name, computed in tables.items():
            declared = reference.get(name)
            if not declared or computed is None:
                continue
            for key in sorted(declared):
                match = _PAIR.match(key)
                i, j = int(match.group(1)) - 1, int(match.group(2)) - 1
                if not (0 <= i < d and 0 <= j < d):
                    request.mark_input_error(f"{request.definition.source}: reference.{name}: index {key} out of range")
                    return
                expected = parser.parse(declared[key])
                if not (expected - computed[i][j]).is_zero():
                    request.add_discrepancy(name, str(expected), str(computed[i][j]), key)

    @staticmethod
    def _compare_scalars(request: ReportRequest, reference: dict, parser: ExpressionParser):
        ts, curvature = request.trans_sasakian, request.curvature
        computed = {
            "alpha": ts.alpha if ts is not None else None,
            "beta": ts.beta if ts is not None else None,
            "phi_sectional": curvature.c if curvature is not None else None,
        }
        for name in ("alpha", "beta", "phi_sectional"):
            if name not in reference or computed[name] is None:
                continue
            expected = parser.parse(reference[name])
            if not (expected - computed[name]).is_zero():
                request.add_discrepancy(name, str(expected), str(computed[name]))

    @staticmethod
    def _compare_lambda_relation(request: ReportRequest, reference: dict):
        relation = reference.get("lambda_of_mu")
        solution = request.values.get("soliton")
        if relation is None or solution is None or solution.mu is None or solution.lam is None:
            return
        expected = parse(relation, ["mu"])
        try:
            value = expected.evaluate_rational({"mu": solution.mu})
        except EvaluationError:
            return
        if value != solution.lam:
            request.add_discrepancy(
                "lambda_of_mu", f"{relation} = {value} at mu = {solution.mu}", str(solution.lam)
            )
