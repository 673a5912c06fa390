from __future__ import annotations

import logging

from ..errors.exceptions import NoDecompositionError
from ..geometry.bodies import ConvexBody, CylinderBody, HalfSpace, HPolyhedron, PolyhedralBody, SupportOracle
from ..models.enums import Confidence, DstarMethod
from ..models.reports import DstarReport, RecessionReport
from .oracle import ScalingSchedule, dstar_oracle
from .polyhedral import dstar_polyhedral, recession_generators, structure_decompose

logger = logging.getLogger("isores")


def polyhedral_form(body: ConvexBody) -> PolyhedralBody | None:
    """The body as a polyhedron when one is known, oracles with an outer polyhedron included."""
    if isinstance(body, HPolyhedron | HalfSpace | CylinderBody):
        return body
    if isinstance(body, SupportOracle) and body.polyhedron is not None:
        return body.polyhedron
    return None


def dstar_report(
    body: ConvexBody,
    schedule: ScalingSchedule | None = None,
    workers: int | None = None,
) -> DstarReport:
    """Asymptotic dimension by rank when the body is polyhedral, by rescaling otherwise."""
    poly = polyhedral_form(body)
    if poly is not None:
        result = dstar_polyhedral(poly)
        return DstarReport(
            dim=result.dim,
            dstar=result.dstar,
            method=DstarMethod.POLYHEDRAL,
            confidence=Confidence.EXACT,
            singular_values=[float(s) for s in result.singular_values],
            rays=result.rays.tolist(),
            warnings=result.warnings,
        )
    estimate = dstar_oracle(body, schedule=schedule, workers=workers)
    warnings = []
    if estimate.confidence is Confidence.PARTIAL:
        warnings.append("only some scaling schedules stabilised; d* is a lower bound")
    return estimate.to_report(body.dim, warnings)


def recession_report(body: PolyhedralBody) -> RecessionReport:
    """Recession cone generators and, when ``0 < d* < N``, the enveloping cylinder ``Z + D``."""
    poly: HPolyhedron = body.as_polyhedron()
    rays, lineality = recession_generators(poly)
    rank = dstar_polyhedral(poly)
    report = RecessionReport(
        dim=poly.dim,
        A=poly.A.tolist(),
        rays=rays.tolist(),
        lineality=lineality.tolist(),
        span_dim=rank.dstar,
    )
    try:
        decomposition = structure_decompose(poly)
    except NoDecompositionError as exc:
        logger.info("No cylinder decomposition: %s", exc)
        return report
    D = decomposition.cross_section
    return report.model_copy(
        update={
            "z_basis": decomposition.z_basis.tolist(),
            "cross_section_A": D.A.tolist(),
            "cross_section_b": D.b.tolist(),
        }
    )
