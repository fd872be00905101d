"""Validation handler - Step 1: build the manifold and check the structure axioms."""

from itertools import combinations

from domain.errors import EvaluationError, ManifoldDefinitionError
from domain.geometry.contact import ContactStructure, collect_axiom_violations, phi_rank_check
from domain.geometry.frame import levi_civita
from domain.models.report_request import ReportRequest
from service.pipeline.handlers.base_handler import AnalysisHandler


class ValidationHandler(AnalysisHandler):
    """
    Builds the frame manifold and its Levi-Civita connection, then checks
    the Jacobi identity and every almost-contact axiom.
    First step in the chain.
    """

    def handle(self, request: ReportRequest) -> ReportRequest:
        """
        Validate the manifold definition.

        Args:
            request: Report request

        Returns:
            Request with the structure section (or an input error)
        """
        definition = request.definition
        try:
            manifold = definition.build()
        except ManifoldDefinitionError as e:
            request.mark_input_error(f"{definition.source}: {e}")
            return request

        request.manifold = manifold
        request.connection = levi_civita(manifold)
        d = manifold.dimension

        brackets = {
            f"e{i + 1},e{j + 1}": [str(v) for v in manifold.structure[i][j]]
            for i, j in combinations(range(d), 2)
        }
        jacobi = manifold.jacobi_residuals()
        section = {
            "dimension": d,
            "coordinates": [c.name for c in manifold.coordinates],
            "brackets": brackets,
            "jacobi": jacobi.to_dict(),
        }
        if not jacobi.passed:
            request.mark_failure(f"Jacobi identity fails at {jacobi.first_failure()[0]}")

        if not definition.has_contact:
            section["axioms"] = {"skipped": "no contact structure in the definition"}
            section["verdict"] = "pass" if jacobi.passed else "fail"
            request.add_section("structure", section)
            return self._call_next(request)

        try:
            contact = ContactStructure.build(
                manifold, request.connection, definition.phi, definition.xi_field()
            )
        except ManifoldDefinitionError as e:
            request.mark_input_error(f"{definition.source}: {e}")
            return request

        violations = collect_axiom_violations(contact)
        section["axioms"] = {
            "violations": [
                {"equation": v.equation, "index": list(v.indices), "residual": v.residual}
                for v in violations
            ],
            "verdict": "fail" if violations else "pass",
        }
        rank_ok = True
        if violations:
            request.mark_failure(str(violations[0]))
        else:
            request.contact = contact
            try:
                rank = phi_rank_check(contact)
                section["phi_rank"] = rank.to_dict()
                rank_ok = rank.passed
                if not rank_ok:
                    request.mark_failure(f"φ has trace {rank.trace:g} and rank {rank.rank}")
            except EvaluationError as e:
                section["phi_rank"] = {"skipped": str(e)}

        section["verdict"] = "pass" if jacobi.passed and not violations and rank_ok else "fail"
        request.add_section("structure", section)
        self.logger.debug(f"Structure checked: {len(violations)} axiom violation(s)")
        return self._call_next(request)
