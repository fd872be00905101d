"""Identity handler - Step 4: curvature identity suite."""

from domain.geometry.curvature import identity_suite, structural_identities
from domain.models.report_request import ReportRequest
from service.pipeline.handlers.base_handler import AnalysisHandler

# Printed closed forms whose mismatch is an audit finding, not a failed check
AUDITED_IDENTITIES = {
    "ricci_space_form_printed": "S = (nc − (3n−4)(α²−β²))/2 g + n(α²−β²+c)/2 η⊗η + 2αβ g(·,φ·)",
}


class IdentityHandler(AnalysisHandler):
    """
    Runs every curvature identity for trans-Sasakian data of constant type.
    Without such data only the structural identities (symmetries, Bianchi,
    torsion, metric compatibility) are checked and the rest is skipped
    with a reason.
    """

    def handle(self, request: ReportRequest) -> ReportRequest:
        """
        Run the identity suite.

        Args:
            request: Report request

        Returns:
            Request with the identities section
        """
        if not request.is_valid():
            return request

        m, conn, cd = request.manifold, request.connection, request.curvature
        ts = request.trans_sasakian
        if ts is None or not ts.constant:
            reason = (
                "alpha and beta are not constant"
                if ts is not None
                else "no verified trans-Sasakian structure"
            )
            report = structural_identities(m, conn, cd)
            section = {"scope": "structural", "reason": reason, "entries": report.to_dict()}
        else:
            report = identity_suite(m, conn, cd, request.contact)
            section = {"scope": "full", "entries": report.to_dict()}

        for table in report.entries:
            first = table.first_failure()
            if first is None:
                continue
            if table.identity in AUDITED_IDENTITIES:
                request.add_discrepancy(
                    table.identity, AUDITED_IDENTITIES[table.identity], f"residual {first[1]}", first[0]
                )
            else:
                request.mark_failure(f"{table.identity} fails at {first[0]} (residual {first[1]})")

        request.add_section("identities", section)
        self.logger.debug(f"Identity suite: {len(report.entries)} checked, {len(report.skipped)} skipped")
        return self._call_next(request)
