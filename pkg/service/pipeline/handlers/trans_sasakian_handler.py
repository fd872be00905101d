"""Trans-Sasakian handler - Step 2: extract (alpha, beta), normality and form conditions."""

from domain.errors import TransSasakianError
from domain.geometry.contact import extract_trans_sasakian, normality_tensors, oubina_check
from domain.models.report_request import ReportRequest
from service.pipeline.handlers.base_handler import AnalysisHandler


class TransSasakianHandler(AnalysisHandler):
    """
    Reads (alpha, beta) off the contact structure and verifies the
    covariant-derivative identities on every frame pair. Also reports the
    normality tensors and both differential-form conditions under each
    requested exterior-derivative convention.
    """

    def handle(self, request: ReportRequest) -> ReportRequest:
        """
        Extract and verify the trans-Sasakian functions.

        Args:
            request: Report request

        Returns:
            Request with trans_sasakian, normality and differential_forms sections
        """
        if not request.is_valid():
            return request

        contact = request.contact
        if contact is None:
            reason = (
                "no contact structure in the definition"
                if not request.definition.has_contact
                else "contact structure fails its axioms"
            )
            for name in ("trans_sasakian", "normality", "differential_forms"):
                request.add_section(name, {"skipped": reason})
            return self._call_next(request)

        request.add_section(
            "normality",
            {conv: normality_tensors(contact, conv).to_dict() for conv in request.d_conventions},
        )

        try:
            report = extract_trans_sasakian(contact)
        except TransSasakianError as e:
            request.add_section("trans_sasakian", {"skipped": str(e)})
            request.add_section("differential_forms", {"skipped": str(e)})
            return self._call_next(request)

        request.add_section("trans_sasakian", report.to_dict())
        if not report.passed:
            first = next(t for t in report.tables if not t.passed)
            index, residual = first.first_failure()
            request.mark_failure(f"not trans-Sasakian: {first.identity} fails at {index} (residual {residual})")
            request.add_section("differential_forms", {"skipped": "trans-Sasakian identities fail"})
            return self._call_next(request)

        request.trans_sasakian = report
        request.contact = contact.with_functions(report.alpha, report.beta)
        request.add_section(
            "differential_forms",
            {conv: oubina_check(request.contact, conv).to_dict() for conv in request.d_conventions},
        )
        self.logger.debug(f"Trans-Sasakian type (alpha, beta) = ({report.alpha}, {report.beta})")
        return self._call_next(request)
