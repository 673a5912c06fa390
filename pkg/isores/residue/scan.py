from __future__ import annotations

import logging
from collections.abc import Sequence
from functools import partial

from ..config.constants import LADDER_LENGTH, LADDER_RATIO
from ..errors.exceptions import IsoresError, IsoresInputError, SolverError
from ..geometry.bodies import ConvexBody, CylinderBody
from ..gridsolver.solver import solve_volume
from ..models.bodies import BodyDescription
from ..models.enums import ProfileSource
from ..models.reports import GridCalibration, ProfileRow, ProfileTable, SolveReport, SolverConstants, SolverSettings
from ..profiles.closed_form import profile_free, residue
from ..profiles.construction import ball_attachment
from ..runtime.limiter import map_settled

logger = logging.getLogger("isores")


def ladder(v_min: float, length: int = LADDER_LENGTH, ratio: float = LADDER_RATIO) -> list[float]:
    """Geometric volume ladder ``v_min * ratio^i``."""
    if v_min <= 0 or ratio <= 1 or length < 1:
        raise IsoresInputError("Ladder needs v_min > 0, ratio > 1 and length >= 1", field="volumes")
    return [v_min * ratio**i for i in range(length)]


def _check_volumes(volumes: Sequence[float]) -> list[float]:
    vs = [float(v) for v in volumes]
    if not vs:
        raise IsoresInputError("At least one volume is required", field="volumes")
    if any(v <= 0 for v in vs) or any(b <= a for a, b in zip(vs, vs[1:], strict=False)):
        raise IsoresInputError("Volumes must be positive and strictly increasing", field="volumes")
    return vs


def grid_calibration(
    volumes: Sequence[float],
    settings: SolverSettings | None = None,
    constants: SolverConstants | None = None,
    dim: int = 3,
    workers: int | None = None,
) -> GridCalibration:
    """Solve free space on the ladder's grid and record ``P_grid / I_free``.

    A fixed pitch resolves the ball differently at every volume, so each
    volume gets its own free solve; a pitch derived from
    ``cells_per_length`` needs one solve at ``v = 1``.

    :raises SolverError: A free solve failed; calibrated rows would be meaningless.
    """
    vs = _check_volumes(volumes)
    cfg = (settings or SolverSettings()).model_copy(update={"keep_mask": False, "check_envelopment": False})
    consts = constants or SolverConstants.for_dim(dim)
    invariant = cfg.pitch is None
    points = [1.0] if invariant else vs

    tasks = [partial(solve_volume, None, v, cfg, consts, dim) for v in points]
    ratios: list[float] = []
    for v, result in zip(points, map_settled(tasks, workers), strict=True):
        if isinstance(result, BaseException):
            if isinstance(result, IsoresError):
                raise SolverError(f"Free-space calibration failed at v={v:g}: {result}") from result
            raise result
        ratios.append(result.energy / profile_free(result.v_achieved, dim))
        logger.info("Calibration v=%g: P/I_free = %.6f", v, ratios[-1])
    return GridCalibration(dim=dim, volumes=points, ratios=ratios, scale_invariant=invariant)


def row_from_report(v: float, report: SolveReport, keep_mask: bool = False, ratio: float | None = None) -> ProfileRow:
    """Tabulate one solve; a calibration *ratio* divides perimeter and ``1 + deficit``."""
    dim = report.dim
    perimeter = report.energy
    deficit = report.deficit
    if ratio is not None:
        perimeter = report.energy / ratio
        deficit = (1.0 + report.deficit) / ratio - 1.0
    res = residue(report.v_achieved, perimeter, dim)
    return ProfileRow(
        v=v,
        perimeter=perimeter,
        residue=res,
        source=ProfileSource.GRID_SOLVER,
        components=report.components,
        diameter=report.diameter,
        asymmetry=report.asymmetry,
        deficit=deficit,
        hd_norm=report.hd_norm,
        perimeter_obstacle=report.perimeter_obstacle,
        raw_perimeter=report.energy if ratio is not None else None,
        perimeter_ratio=ratio,
        method=report.method.value,
        seed=report.seed,
        negative_residue=res < 0,
        report=report if keep_mask else report.model_copy(update={"minimizer": None}),
    )


def scan(
    body: ConvexBody | None,
    volumes: Sequence[float],
    settings: SolverSettings | None = None,
    constants: SolverConstants | None = None,
    dim: int | None = None,
    description: BodyDescription | None = None,
    dstar: int | None = None,
    workers: int | None = None,
    calibrate: bool = False,
    calibration: GridCalibration | None = None,
) -> ProfileTable:
    """Solve every volume of the ladder concurrently and tabulate perimeters and residues.

    A row whose solve fails with an :class:`IsoresError` (say an infeasible
    window) becomes an error row; the other rows are unaffected. With
    *calibrate*, perimeters, residues and deficits are measured against
    the solver's own free-space perimeter on the same grid
    (:func:`grid_calibration`); the uncorrected energy stays in
    ``raw_perimeter``. A precomputed *calibration* is used as given.
    """
    vs = _check_volumes(volumes)
    n_dim = body.dim if body is not None else dim
    if n_dim is None:
        raise IsoresInputError("dim is required without a body", field="dim")
    cfg = settings or SolverSettings()
    consts = constants or SolverConstants.for_dim(n_dim)
    if calibration is None and calibrate:
        calibration = grid_calibration(vs, cfg, consts, n_dim, workers)

    tasks = [partial(solve_volume, body, v, cfg, consts, n_dim) for v in vs]
    results = map_settled(tasks, workers)
    rows: list[ProfileRow] = []
    for v, result in zip(vs, results, strict=True):
        if isinstance(result, IsoresError):
            logger.warning("Row v=%g failed: %s", v, result)
            rows.append(ProfileRow(v=v, error=str(result), method=cfg.method.value, seed=cfg.seed))
            continue
        if isinstance(result, BaseException):
            raise result
        ratio = calibration.ratio_at(v) if calibration is not None else None
        row = row_from_report(v, result, ratio=ratio)
        if row.negative_residue:
            logger.warning("Negative residue at v=%g; row excluded from fits", v)
        rows.append(row)
    return ProfileTable(
        dim=n_dim,
        body=description,
        dstar=dstar,
        settings=cfg,
        constants=consts,
        calibration=calibration,
        rows=rows,
    )


def construction_table(
    cylinder: CylinderBody,
    radii: Sequence[float],
    pitch: float | None = None,
    alpha: float | None = None,
    description: BodyDescription | None = None,
    workers: int | None = None,
) -> ProfileTable:
    """Residue lower bounds from ball attachment, one row per radius, as a profile table."""
    rs = [float(r) for r in radii]
    if not rs or any(b <= a for a, b in zip(rs, rs[1:], strict=False)):
        raise IsoresInputError("Radii must be nonempty and strictly increasing", field="radii")
    rows = []
    for r in rs:
        att = ball_attachment(cylinder, r, pitch=pitch, alpha=alpha, workers=workers)
        logger.info("Attachment r=%g: v=%.6g residue=%.6g (+/- %.2g)", r, att.volume, att.residue, att.quadrature_error)
        rows.append(
            ProfileRow(
                v=att.volume,
                perimeter=att.perimeter_bound,
                residue=att.residue,
                source=ProfileSource.CONSTRUCTION,
                negative_residue=att.residue < 0,
            )
        )
    return ProfileTable(dim=cylinder.dim, body=description, dstar=cylinder.k, rows=rows)
