"""Soliton handler - Step 5: solve for (lambda, mu) and compare with the closed forms."""

from fractions import Fraction
from typing import Optional

from domain.errors import ExpressionParseError, ThresholdHypothesisError
from domain.geometry.frame import FrameVectorField
from domain.geometry.soliton import (
    SolitonKind,
    SolitonProblem,
    SolveStatus,
    lie_derivative_metric,
    second_lie_derivative_metric,
    solve,
    theorem_thresholds,
    xi_closed_form_checks,
)
from domain.models.report_request import ReportRequest
from domain.symbolic.parser import ExpressionParser
from service.pipeline.handlers.base_handler import AnalysisHandler

PRINTED_CLOSED_FORMS = {
    "lie_xi_metric": "2β(g − η⊗η)",
    "second_lie_xi_metric": "4β²(g − η⊗η)",
}


class SolitonHandler(AnalysisHandler):
    """
    Solves the (conformal) hyperbolic soliton equations for global constants.
    With V = xi on a space form of constant type it also evaluates the
    closed-form lambda and the mu threshold and records where they disagree
    with the direct solve.
    """

    def handle(self, request: ReportRequest) -> ReportRequest:
        """
        Solve the soliton system.

        Args:
            request: Report request

        Returns:
            Request with the soliton section
        """
        if not request.is_valid():
            return request

        field = self._resolve_field(request)
        if field is None:
            return request

        m, conn, cd = request.manifold, request.connection, request.curvature
        kind = SolitonKind(request.soliton_kind)
        pressure = Fraction(request.pressure) if kind is SolitonKind.CONFORMAL else None
        problem = SolitonProblem(m, conn, cd.ric, field, kind, pressure)
        eta = request.contact.eta if request.contact is not None else None
        solution = solve(problem, eta)
        request.values["soliton"] = solution

        section = {"field": [str(v) for v in field], "solution": solution.to_dict()}
        if solution.status is SolveStatus.UNIQUE and not solution.residuals.passed:
            request.mark_failure("soliton residual is nonzero at the solved (lambda, mu)")

        if request.trans_sasakian is not None:
            self._closed_forms(request, section)
            section["theorem"] = self._theorem(request, field, solution, pressure)
        else:
            section["theorem"] = {"skipped": "no verified trans-Sasakian structure"}

        request.add_section("soliton", section)
        self.logger.debug(f"Soliton: status={solution.status.value}, lambda={solution.lam}, mu={solution.mu}")
        return self._call_next(request)

    def _resolve_field(self, request: ReportRequest) -> Optional[FrameVectorField]:
        spec = request.soliton_field.strip()
        if spec == "xi":
            if request.contact is None:
                request.mark_input_error("--field xi needs a valid contact structure")
                return None
            return request.contact.xi

        parser = ExpressionParser(request.manifold.coordinates)
        parts = [part.strip() for part in spec.split(",")]
        d = request.manifold.dimension
        if len(parts) != d:
            request.mark_input_error(f"--field needs {d} comma-separated components, got {len(parts)}")
            return None
        try:
            return FrameVectorField(tuple(parser.parse(part) for part in parts))
        except ExpressionParseError as e:
            request.mark_input_error(f"--field: {e}")
            return None

    @staticmethod
    def _closed_forms(request: ReportRequest, section: dict):
        contact, m, conn = request.contact, request.manifold, request.connection
        h = lie_derivative_metric(m, conn, contact.xi)
        h2 = second_lie_derivative_metric(m, conn, contact.xi)
        request.values["lie_xi"] = h
        request.values["second_lie_xi"] = h2

        tables = xi_closed_form_checks(contact, contact.beta, h, h2)
        section["xi_closed_forms"] = [t.to_dict() for t in tables]
        holds = {}
        for name, printed in PRINTED_CLOSED_FORMS.items():
            minus = next(t for t in tables if t.identity == f"{name}_minus_eta_eta")
            plus = next(t for t in tables if t.identity == f"{name}_plus_eta_eta")
            holds[name] = "minus" if minus.passed else "plus" if plus.passed else "neither"
            if not minus.passed:
                index, residual = minus.first_failure()
                request.add_discrepancy(f"{name}_closed_form", printed, f"residual {residual}", index)
        section["xi_closed_form_holds"] = holds

    @staticmethod
    def _theorem(request: ReportRequest, field: FrameVectorField, solution, pressure) -> dict:
        contact, d = request.contact, request.manifold.dimension
        if any(not (a - b).is_zero() for a, b in zip(field, contact.xi)):
            return {"skipped": "the closed form assumes V = ξ"}
        if d % 2 == 0:
            return {"skipped": f"dimension {d} is not odd"}
        if not request.trans_sasakian.constant:
            return {"skipped": "alpha and beta are not constant"}
        if solution.mu is None:
            return {"skipped": "mu is not determined by the solve"}

        try:
            result = theorem_thresholds(
                contact.alpha.constant_value(),
                contact.beta.constant_value(),
                (d - 1) // 2,
                solution.mu,
                pressure,
                solution.kind,
            )
        except ThresholdHypothesisError as e:
            return {"skipped": str(e)}

        block = result.to_dict()
        block["mu"] = str(solution.mu)
        block["solved_lambda"] = None if solution.lam is None else str(solution.lam)
        if solution.lam is not None and result.lam != solution.lam:
            request.add_discrepancy("theorem_lambda", str(result.lam), str(solution.lam))
        if not result.agrees:
            request.add_discrepancy("theorem_regime", result.regime, result.formula_regime)
        return block
