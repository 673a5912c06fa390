from __future__ import annotations

import logging

import numpy as np
import numpy.typing as npt

from ..errors.exceptions import ConstructionError
from ..geometry.bodies import BoolArray, FloatArray
from ..geometry.operations import boundary_normal, lattice_points
from ..geometry.polyhedra import complement_basis
from ..profiles.closed_form import ball_radius, halfball_radius
from .domain import DiscreteSet, Grid

logger = logging.getLogger("isores")

_BISECTION_STEPS = 60


def _nearest(grid: Grid, center: FloatArray, n_target: int, allowed: BoolArray) -> BoolArray:
    idx = np.flatnonzero(allowed.reshape(-1))
    pts = grid.centers(np.stack(np.unravel_index(idx, grid.shape), axis=-1))
    dist = np.linalg.norm(pts - center, axis=1)
    order = np.argsort(dist, kind="stable")[:n_target]
    mask = np.zeros(allowed.size, dtype=bool)
    mask[idx[order]] = True
    return mask.reshape(grid.shape)


def candidate_halfball(
    grid: Grid,
    v: float,
    point: npt.ArrayLike | None = None,
    normal: npt.ArrayLike | None = None,
) -> DiscreteSet:
    """Digitized half-ball of volume *v* seated on a flat facet of the obstacle.

    :param point: Facet point; defaults to the grid anchor.
    :param normal: Outward facet normal; detected from the body when omitted.
    :raises ConstructionError: No facet at *point*, facet smaller than the half-ball, or too few free cells.
    """
    body = grid.body
    if body is None:
        raise ConstructionError("Free space has no facet to seat a half-ball on")
    p = grid.center if point is None else np.asarray(point, dtype=np.float64).reshape(-1)
    if normal is None:
        n, flat = boundary_normal(body, p)
        if not flat:
            raise ConstructionError("Obstacle boundary is not flat at the anchor point")
    else:
        n = np.asarray(normal, dtype=np.float64).reshape(-1)
        n = n / np.linalg.norm(n)
    n_target = grid.target_cells(v)
    if n_target < 1:
        raise ConstructionError("Volume is smaller than one cell")

    rho = halfball_radius(v, grid.dim)
    tangent = complement_basis(n[None, :], grid.dim)
    disk = lattice_points(grid.dim - 1, rho, rho / 8) @ tangent
    inset = 1e-9 * max(1.0, rho)
    if not np.all(body.contains_points(p + disk - inset * n)):
        raise ConstructionError(f"Flat facet at the anchor is smaller than the half-ball radius {rho:.4g}")

    free = grid.free_mask
    centers = grid.centers(np.nonzero(np.ones(grid.shape, dtype=bool)))
    above = ((centers - p) @ n > 0).reshape(grid.shape)
    allowed = free & above
    if np.count_nonzero(allowed) < n_target:
        raise ConstructionError("Half-ball does not fit in the free window")
    mask = _nearest(grid, p, n_target, allowed)
    logger.debug("Half-ball candidate: %d cells, radius %.4g", n_target, rho)
    return DiscreteSet(grid, mask)


def candidate_tangent_ball(grid: Grid, v: float) -> DiscreteSet:
    """Ball touching the obstacle from outside at the anchor, radius bisected so it holds *v* in free cells.

    Without an obstacle this is the plain ball around the window center.
    """
    n_target = grid.target_cells(v)
    if n_target < 1:
        raise ConstructionError("Volume is smaller than one cell")
    free = grid.free_mask
    if grid.body is None:
        return DiscreteSet(grid, _nearest(grid, grid.center, n_target, free))

    n_out, _ = boundary_normal(grid.body, grid.center)
    idx = np.flatnonzero(free.reshape(-1))
    pts = grid.centers(np.stack(np.unravel_index(idx, grid.shape), axis=-1))

    def count(r: float) -> int:
        c = grid.center + r * n_out
        return int(np.count_nonzero(np.linalg.norm(pts - c, axis=1) <= r))

    def fits(r: float) -> bool:
        return 2 * r <= grid.window_radius

    hi = ball_radius(v, grid.dim)
    while count(hi) < n_target:
        hi *= 1.5
        if not fits(hi):
            raise ConstructionError("Tangent ball of the requested volume leaves the window")
    lo = 0.0
    for _ in range(_BISECTION_STEPS):
        mid = 0.5 * (lo + hi)
        if count(mid) >= n_target:
            hi = mid
        else:
            lo = mid
    if not fits(hi):
        raise ConstructionError("Tangent ball of the requested volume leaves the window")
    center = grid.center + hi * n_out
    mask = _nearest(grid, center, n_target, free)
    logger.debug("Tangent ball candidate: radius %.4g, %d cells", hi, n_target)
    return DiscreteSet(grid, mask)
