from __future__ import annotations

import logging
from collections.abc import Sequence

from ..asymdim.polyhedral import structure_decompose
from ..config.constants import CGR_TOLERANCE
from ..errors.exceptions import IsoresInputError
from ..geometry.bodies import PolyhedralBody
from ..geometry.loader import describe_body
from ..models.bodies import BodyDescription
from ..models.enums import Verdict
from ..models.reports import SandwichReport, SolverConstants, SolverSettings
from ..profiles.closed_form import profile_free
from .fitting import fit_power_law
from .scan import grid_calibration, scan

logger = logging.getLogger("isores")

_EXPONENT_SLACK = 0.1


def cylinder_sandwich(
    body: PolyhedralBody,
    volumes: Sequence[float],
    settings: SolverSettings | None = None,
    constants: SolverConstants | None = None,
    description: BodyDescription | None = None,
    workers: int | None = None,
    calibrate: bool = False,
) -> SandwichReport:
    """Compare ``C`` with its enveloping cylinder ``Z + D`` on the same ladder.

    Checks ``I_C <= I_{Z+D}`` and ``R_C >= R_{Z+D}`` up to the comparison
    tolerance, and fits the residue gap against ``v^((d* - 1)/N)``. With
    *calibrate* both ladders share one free-space calibration.

    :raises NoDecompositionError: ``d*`` is ``0`` or ``N``.
    """
    decomposition = structure_decompose(body)
    dim = body.dim
    dstar = decomposition.dstar
    if not 1 <= dstar <= dim - 2:
        raise IsoresInputError(f"Cylinder comparison needs 1 <= d* <= N - 2, got d* = {dstar}", field="body")
    cylinder = decomposition.cylinder
    logger.info("Comparing against cylinder with dim Z = %d", dstar)

    calibration = grid_calibration(volumes, settings, constants, dim, workers) if calibrate else None
    body_table = scan(
        body,
        volumes,
        settings,
        constants,
        description=description,
        dstar=dstar,
        workers=workers,
        calibration=calibration,
    )
    cyl_table = scan(
        cylinder,
        volumes,
        settings,
        constants,
        description=describe_body(cylinder),
        dstar=dstar,
        workers=workers,
        calibration=calibration,
    )

    perimeter_gaps: list[float | None] = []
    residue_gaps: list[float | None] = []
    perimeter_ok = residue_ok = True
    positive: list[tuple[float, float]] = []
    for a, b in zip(body_table.rows, cyl_table.rows, strict=True):
        if not (a.usable and b.usable) or a.residue is None or b.residue is None:
            perimeter_gaps.append(None)
            residue_gaps.append(None)
            continue
        assert a.perimeter is not None and b.perimeter is not None
        tol = CGR_TOLERANCE * profile_free(a.v, dim)
        p_gap = a.perimeter - b.perimeter
        r_gap = a.residue - b.residue
        perimeter_gaps.append(p_gap)
        residue_gaps.append(r_gap)
        if p_gap > tol:
            perimeter_ok = False
            logger.warning("v=%g: body perimeter exceeds the cylinder's by %.4g", a.v, p_gap)
        if r_gap < -tol:
            residue_ok = False
            logger.warning("v=%g: body residue below the cylinder's by %.4g", a.v, -r_gap)
        if r_gap > tol:
            positive.append((a.v, r_gap))

    expected = (dstar - 1) / dim
    compared = sum(g is not None for g in residue_gaps)
    gap_fit = None
    if len(positive) >= 2:
        gap_fit = fit_power_law([p[0] for p in positive], [p[1] for p in positive])
    if compared < 2:
        verdict = Verdict.INCONCLUSIVE
    elif not (perimeter_ok and residue_ok):
        verdict = Verdict.INCONSISTENT
    elif gap_fit is None or gap_fit.exponent <= expected + _EXPONENT_SLACK:
        verdict = Verdict.CONSISTENT
    else:
        verdict = Verdict.INCONSISTENT
    return SandwichReport(
        dim=dim,
        dstar=dstar,
        z_basis=decomposition.z_basis.tolist(),
        body_table=body_table,
        cylinder_table=cyl_table,
        perimeter_gaps=perimeter_gaps,
        residue_gaps=residue_gaps,
        perimeter_ok=perimeter_ok,
        residue_ok=residue_ok,
        gap_fit=gap_fit,
        expected_exponent=expected,
        verdict=verdict,
    )
