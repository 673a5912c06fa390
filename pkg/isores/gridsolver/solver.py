from __future__ import annotations

import logging

from ..errors.exceptions import ConstructionError, IsoresInputError, SolverError
from ..geometry.bodies import BoolArray, ConvexBody
from ..models.enums import SolveMethod
from ..models.reports import SolveReport, SolverConstants, SolverSettings
from .annealing import AnnealOptions, anneal
from .candidates import candidate_halfball, candidate_tangent_ball
from .diagnostics import asymmetry_deficit, diagnostics, envelopment, hausdorff_to_ball, lambda_violations
from .domain import DiscreteSet, Grid, build_domain, encode_set
from .perimeter import perimeter_split
from .relaxation import EdgeOperator, RelaxedField, binarize, relax, threshold

logger = logging.getLogger("isores")


def _relative(grid: Grid, mask: BoolArray) -> float:
    return perimeter_split(DiscreteSet(grid, mask).classes(), grid.pitch)[0]


def best_candidate(grid: Grid, v: float) -> tuple[DiscreteSet, str]:
    """The cheaper of the half-ball and tangent-ball candidates that can be built."""
    found: list[tuple[float, str, DiscreteSet]] = []
    skipped: dict[str, str] = {}
    for name, build in (("halfball", candidate_halfball), ("tangent-ball", candidate_tangent_ball)):
        try:
            dset = build(grid, v)
        except ConstructionError as exc:
            logger.debug("Candidate %s unavailable: %s", name, exc)
            skipped[name] = str(exc)
            continue
        found.append((_relative(grid, dset.mask), name, dset))
    if not found:
        raise SolverError("No candidate set fits in the window", partial={"v": v, "skipped": skipped})
    _, name, dset = min(found, key=lambda item: item[0])
    return dset, name


def solve(
    grid: Grid,
    v: float,
    settings: SolverSettings | None = None,
    constants: SolverConstants | None = None,
) -> SolveReport:
    """Minimize ``P(E; outside C) + Lambda0 v^(-1/N) ||E| - v|`` over sets of free cells.

    ``relax`` solves the convex relaxation, pushes it to 0/1 and keeps the
    *n* best cells; ``anneal`` anneals the best geometric candidate; ``both``
    warm-starts the binarization from relaxation and candidate together and
    anneals the better of the two sets.

    :raises SolverError: The thresholded set is empty or no start set exists.
    """
    cfg = settings or SolverSettings()
    consts = constants or SolverConstants.for_dim(grid.dim)
    if consts.dim != grid.dim:
        raise IsoresInputError("Solver constants are for another dimension", field="constants")
    n_target = grid.target_cells(v)
    if n_target < 1:
        raise IsoresInputError(f"Volume {v} is below one cell at pitch {grid.pitch}", field="v")
    lam_volume = consts.penalty(v)
    lam = lam_volume * grid.pitch
    warnings: list[str] = []
    method = cfg.method

    relaxed: RelaxedField | None = None
    op: EdgeOperator | None = None
    if method in (SolveMethod.RELAX, SolveMethod.BOTH):
        op = EdgeOperator.build(grid)
        relaxed = relax(grid, n_target, lam, cfg.relax_iterations, cfg.gap_target, operator=op)
        if not relaxed.converged:
            msg = f"relaxation stopped at gap {relaxed.gap:.3g} after {relaxed.iterations} iterations"
            logger.warning(msg)
            warnings.append(msg)

    options = AnnealOptions(cfg.anneal_sweeps, cfg.anneal_t0, cfg.anneal_cooling, cfg.seed)
    if method is SolveMethod.RELAX:
        assert relaxed is not None
        field = binarize(grid, relaxed, n_target, lam, cfg.binarize_rounds, cfg.relax_iterations, cfg.gap_target, op)
        mask = threshold(grid, field.u, n_target)
        start = "relax"
    elif method is SolveMethod.ANNEAL:
        cand, start = best_candidate(grid, v)
        mask = anneal(grid, cand.mask, n_target, lam, options).mask
    else:
        assert relaxed is not None
        cand, cand_name = best_candidate(grid, v)
        mixed = 0.5 * (relaxed.u + cand.mask)
        warm = relax(grid, n_target, lam, cfg.relax_iterations, cfg.gap_target, start=mixed, warm=relaxed, operator=op)
        field = binarize(grid, warm, n_target, lam, cfg.binarize_rounds, cfg.relax_iterations, cfg.gap_target, op)
        dc_mask = threshold(grid, field.u, n_target)
        if _relative(grid, dc_mask) <= _relative(grid, cand.mask):
            seed_mask, start = dc_mask, "relax"
        else:
            seed_mask, start = cand.mask, cand_name
        mask = anneal(grid, seed_mask, n_target, lam, options).mask

    dset = DiscreteSet(grid, mask)
    if dset.cells == 0:
        raise SolverError(
            "Minimization produced an empty set",
            partial={
                "start": start,
                "n_target": n_target,
                "relaxed_energy": relaxed.lower_bound if relaxed is not None else None,
                "relaxed_gap": relaxed.gap if relaxed is not None else None,
            },
        )
    rel, obs = perimeter_split(dset.classes(), grid.pitch)
    achieved = dset.volume
    penalized = rel + lam_volume * abs(achieved - v)
    if obs > rel * 1.02 + grid.pitch ** (grid.dim - 1):
        warnings.append(f"obstacle perimeter {obs:.4g} exceeds the free perimeter {rel:.4g}")

    diag = diagnostics(dset, consts, v)
    warnings.extend(diag.warnings)
    asym = asymmetry_deficit(dset, cfg.seed)
    hd = hausdorff_to_ball(dset, asym.center)
    violations = lambda_violations(dset, lam_volume, cfg.lambda_checks, cfg.seed)
    if violations:
        warnings.append(f"{violations} of {cfg.lambda_checks} local perturbations lower the penalized energy")
    env = envelopment(dset) if cfg.check_envelopment else None

    logger.info(
        "Solved v=%.6g (N=%d, pitch %.4g): P=%.6g, obstacle %.6g, %d component(s)",
        v, grid.dim, grid.pitch, rel, obs, diag.components,
    )
    return SolveReport(
        dim=grid.dim,
        v_target=v,
        v_achieved=achieved,
        pitch=grid.pitch,
        window_multiple=grid.window_multiple,
        window_radius=grid.window_radius,
        anchor=[float(x) for x in grid.center],
        energy=rel,
        penalized_energy=penalized,
        perimeter_free=rel,
        perimeter_obstacle=obs,
        components=diag.components,
        diameter=diag.diameter,
        asymmetry=asym.asymmetry,
        deficit=asym.deficit,
        ball_center=[float(x) for x in asym.center],
        hd_norm=hd,
        curvature_mean=diag.curvature_mean,
        curvature_spread=diag.curvature_spread,
        curvature_max=diag.curvature_max,
        curvature_bound=diag.curvature_bound,
        density_min=diag.density_min,
        density_ok=diag.density_ok,
        components_ok=diag.components_ok,
        diameter_ok=diag.diameter_ok,
        lambda_violations=violations,
        lambda_checks=cfg.lambda_checks,
        mass_drift=diag.mass_drift,
        drift_flagged=diag.drift_flagged,
        envelopment=env,
        relaxed_energy=relaxed.lower_bound if relaxed is not None else None,
        relaxed_gap=relaxed.gap if relaxed is not None else None,
        relax_iterations=relaxed.iterations if relaxed is not None else 0,
        converged=relaxed.converged if relaxed is not None else None,
        method=method,
        seed=cfg.seed,
        start=start,
        warnings=warnings,
        minimizer=encode_set(dset) if cfg.keep_mask else None,
    )


def solve_volume(
    body: ConvexBody | None,
    v: float,
    settings: SolverSettings | None = None,
    constants: SolverConstants | None = None,
    dim: int | None = None,
) -> SolveReport:
    """Build the window for *v* and solve; the usual entry point for ladders."""
    cfg = settings or SolverSettings()
    grid = build_domain(
        body,
        v,
        dim=dim,
        window=cfg.window,
        pitch=cfg.pitch,
        cells_per_length=cfg.cells_per_length,
        constants=constants,
    )
    return solve(grid, v, cfg, constants)