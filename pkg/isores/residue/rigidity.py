from __future__ import annotations

import logging
from collections.abc import Sequence

import numpy as np
from scipy.stats import linregress

from ..asymdim.report import dstar_report
from ..config.constants import FREE_RATIO_FLOOR, PROFILE_TOLERANCE
from ..errors.exceptions import IsoresInputError
from ..geometry.bodies import ConvexBody
from ..models.bodies import BodyDescription
from ..models.enums import RigidityVerdict
from ..models.reports import ProfileTable, RigidityReport, SolverConstants, SolverSettings
from ..profiles.closed_form import profile_free, profile_halfspace
from .scan import scan

logger = logging.getLogger("isores")

# ratio drop per unit of log v still read as a flat trend
_TREND_FLOOR = -0.005


def rigidity_verdict(table: ProfileTable, dstar: int) -> RigidityReport:
    """Classify a solved ladder: half-space profile for ``d* >= N - 1``, free profile in the limit otherwise."""
    dim = table.dim
    regime = RigidityVerdict.HALF_SPACE if dstar >= dim - 1 else RigidityVerdict.FREE_PROFILE
    rows = [row for row in table.rows if row.usable and row.perimeter is not None]
    notes: list[str] = [f"{row.v:g}: {row.error}" for row in table.rows if row.error]
    ratios: list[float | None] = []
    for row in table.rows:
        if not row.usable or row.perimeter is None:
            ratios.append(None)
            continue
        if regime is RigidityVerdict.HALF_SPACE:
            reference = profile_halfspace(row.v, dim)
        else:
            reference = profile_free(row.v, dim)
        ratios.append(row.perimeter / reference)

    values = [r for r in ratios if r is not None]
    if len(values) < 2:
        notes.append("fewer than two solved volumes")
        return RigidityReport(
            dim=dim,
            dstar=dstar,
            regime=regime,
            ratios=ratios,
            verdict=RigidityVerdict.INCONCLUSIVE,
            diagnostics=notes,
        )

    for row in rows:
        assert row.perimeter is not None
        if row.perimeter < profile_halfspace(row.v, dim) * (1 - PROFILE_TOLERANCE):
            notes.append(f"v={row.v:g}: perimeter below the half-space profile")

    if regime is RigidityVerdict.HALF_SPACE:
        deviation = max(abs(r - 1.0) for r in values)
        verdict = regime if deviation <= PROFILE_TOLERANCE else RigidityVerdict.INCONCLUSIVE
        if verdict is RigidityVerdict.INCONCLUSIVE:
            notes.append(f"max |I/I_H - 1| = {deviation:.4f} above {PROFILE_TOLERANCE:g}")
        return RigidityReport(
            dim=dim,
            dstar=dstar,
            regime=regime,
            ratios=ratios,
            max_deviation=deviation,
            final_ratio=values[-1],
            verdict=verdict,
            diagnostics=notes,
        )

    log_v = np.log([row.v for row in rows])
    slope = float(linregress(log_v, values).slope)
    final = values[-1]
    verdict = RigidityVerdict.INCONCLUSIVE
    if final >= FREE_RATIO_FLOOR and slope >= _TREND_FLOOR:
        verdict = regime
    else:
        if final < FREE_RATIO_FLOOR:
            notes.append(f"final I/I_free = {final:.4f} below {FREE_RATIO_FLOOR:g}")
        if slope < _TREND_FLOOR:
            notes.append(f"I/I_free decreases along the ladder (slope {slope:.4f})")
    if any(row.residue is not None and row.residue <= 0 for row in rows):
        notes.append("some residues are not positive")
    return RigidityReport(
        dim=dim,
        dstar=dstar,
        regime=regime,
        ratios=ratios,
        max_deviation=max(abs(r - 1.0) for r in values),
        final_ratio=final,
        trend_slope=slope,
        verdict=verdict,
        diagnostics=notes,
    )


def rigidity_check(
    body: ConvexBody | None,
    volumes: Sequence[float],
    settings: SolverSettings | None = None,
    constants: SolverConstants | None = None,
    dstar: int | None = None,
    dim: int | None = None,
    description: BodyDescription | None = None,
    workers: int | None = None,
    calibrate: bool = False,
) -> tuple[RigidityReport, ProfileTable]:
    """Compute ``d*`` (unless given), scan the ladder and classify the profile.

    With *calibrate* the ratios use calibrated perimeters (see :func:`~isores.residue.scan.scan`).
    """
    if body is None and dim is None:
        raise IsoresInputError("dim is required without a body", field="dim")
    if dstar is None:
        dstar = 0 if body is None else dstar_report(body, workers=workers).dstar
    table = scan(
        body,
        volumes,
        settings,
        constants,
        dim=dim,
        description=description,
        dstar=dstar,
        workers=workers,
        calibrate=calibrate,
    )
    report = rigidity_verdict(table, dstar)
    logger.info("Rigidity verdict for d*=%d: %s", dstar, report.verdict.value)
    return report, table
