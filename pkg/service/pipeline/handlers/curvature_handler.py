"""Curvature handler - Step 3: connection, Riemann, Ricci, scalar and phi-sectional curvature."""

from itertools import combinations, product

from domain.geometry.curvature import compute_curvature, phi_sectional_on_probes
from domain.models.report_request import ReportRequest
from service.pipeline.handlers.base_handler import AnalysisHandler


class CurvatureHandler(AnalysisHandler):
    """
    Computes curvature tables under the requested Ricci trace convention.
    Component keys are 1-based frame labels; ``riemann["e1,e2,e2"]`` lists
    the frame components of ``R(e1, e2) e2``.
    """

    def handle(self, request: ReportRequest) -> ReportRequest:
        """
        Compute curvature.

        Args:
            request: Report request

        Returns:
            Request with the curvature section
        """
        if not request.is_valid():
            return request

        m, conn = request.manifold, request.connection
        d = m.dimension
        cd = compute_curvature(conn, request.ricci_convention)
        request.curvature = cd

        section = {
            "ricci_convention": request.ricci_convention,
            "connection": {
                f"e{i + 1},e{j + 1}": [str(v) for v in conn.gamma[i][j]]
                for i, j in product(range(d), repeat=2)
            },
            "riemann": {
                f"e{i + 1},e{j + 1},e{k + 1}": [str(v) for v in cd.riem[i][j][k]]
                for (i, j), k in product(combinations(range(d), 2), range(d))
            },
            "ricci": {
                f"e{i + 1},e{j + 1}": str(cd.ric[i][j]) for i in range(d) for j in range(i, d)
            },
            "scalar": str(cd.scalar),
        }

        if request.contact is not None:
            phi_result = phi_sectional_on_probes(cd, request.contact)
            if phi_result.constant_on_probes:
                cd.c = phi_result.c
            section["phi_sectional"] = phi_result.to_dict()

        request.add_section("curvature", section)
        return self._call_next(request)
