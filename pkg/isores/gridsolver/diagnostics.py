from __future__ import annotations

import itertools
import logging
import math
from dataclasses import dataclass, field

import numpy as np
from scipy import ndimage
from scipy.spatial import ConvexHull, QhullError, cKDTree
from scipy.spatial.distance import pdist

from ..config.constants import ASYMMETRY_SEEDS, CURVATURE_SMOOTHING, LAMBDA_FLIP_RADIUS
from ..errors.exceptions import IsoresInputError
from ..geometry.bodies import BoolArray, FloatArray, SupportOracle
from ..models.reports import SolverConstants
from ..profiles.closed_form import ball_radius, profile_free
from .domain import FREE, IN_SET, OBSTACLE, OUTSIDE, DiscreteSet, Grid
from .perimeter import full_perimeter, perimeter_split

logger = logging.getLogger("isores")

_DENSITY_SAMPLES = 64
_DIAMETER_POINTS = 4000


@dataclass(frozen=True)
class Diagnostics:
    """Structural checks of a (near-)minimizer against the penalized-problem estimates."""

    components: int
    components_ok: bool
    diameter: float
    diameter_ok: bool
    density_min: float | None
    density_ok: bool
    curvature_mean: float | None
    curvature_spread: float | None
    curvature_max: float | None
    curvature_bound: float
    barycenter: FloatArray
    mass_drift: float
    drift_flagged: bool
    touches_window: bool
    warnings: list[str] = field(default_factory=list)


@dataclass(frozen=True)
class Asymmetry:
    asymmetry: float
    deficit: float
    center: FloatArray


def _face_structure(dim: int) -> BoolArray:
    return np.asarray(ndimage.generate_binary_structure(dim, 1))


def count_components(mask: BoolArray) -> int:
    """Face-connected components of a cell mask."""
    _, n = ndimage.label(mask, structure=_face_structure(mask.ndim))
    return int(n)


def _touching(mask: BoolArray, cls_mask: BoolArray) -> BoolArray:
    """Cells of *mask* with a face neighbour in *cls_mask* (the array edge counts as outside)."""
    grown = ndimage.binary_dilation(cls_mask, structure=_face_structure(mask.ndim), border_value=0)
    return mask & grown


def boundary_cells(dset: DiscreteSet) -> BoolArray:
    """Set cells with a face neighbour outside the set."""
    mask = dset.mask
    return mask & ~ndimage.binary_erosion(mask, structure=_face_structure(mask.ndim), border_value=0)


def set_diameter(grid: Grid, mask: BoolArray) -> float:
    """Largest distance between cell centers of the set."""
    edge = mask & ~ndimage.binary_erosion(mask, structure=_face_structure(mask.ndim), border_value=0)
    pts = grid.centers(np.nonzero(edge))
    if pts.shape[0] < 2:
        return 0.0
    try:
        pts = pts[ConvexHull(pts).vertices]
    except QhullError:
        if pts.shape[0] > _DIAMETER_POINTS:
            pts = pts[:: pts.shape[0] // _DIAMETER_POINTS + 1]
    return float(pdist(pts).max())


def _density(dset: DiscreteSet, radius: float) -> float | None:
    grid = dset.grid
    edge = np.flatnonzero(boundary_cells(dset).reshape(-1))
    if edge.size == 0:
        return None
    picks = edge[:: max(1, edge.size // _DENSITY_SAMPLES)]
    samples = grid.centers(np.stack(np.unravel_index(picks, grid.shape), axis=-1))
    tree = cKDTree(grid.centers(np.nonzero(dset.mask)))
    counts = np.asarray(tree.query_ball_point(samples, radius, return_length=True))
    return float(counts.min() * grid.cell_volume / radius**grid.dim)


def _curvature(dset: DiscreteSet) -> FloatArray:
    """Mean curvature (sum of principal curvatures) at boundary cells away from the obstacle and the window."""
    grid = dset.grid
    phi = ndimage.gaussian_filter(dset.mask.astype(np.float64), CURVATURE_SMOOTHING, mode="constant")
    grads = np.gradient(phi, grid.pitch)
    norm = np.sqrt(sum(g * g for g in grads))
    safe = np.where(norm > 1e-12, norm, 1.0)
    div = sum(np.gradient(g / safe, grid.pitch, axis=i) for i, g in enumerate(grads))
    curvature = -np.asarray(div)
    edge = _touching(dset.mask, (grid.labels == FREE) & ~dset.mask)
    near = ndimage.binary_dilation(
        (grid.labels == OBSTACLE) | (grid.labels == OUTSIDE), iterations=3, border_value=1
    )
    keep = edge & ~near
    return np.asarray(curvature[keep], dtype=np.float64)


def _touches_window(dset: DiscreteSet) -> bool:
    return bool(np.any(_touching(dset.mask, dset.grid.labels == OUTSIDE)))


def diagnostics(dset: DiscreteSet, constants: SolverConstants, v: float | None = None) -> Diagnostics:
    """Components, diameter, density, curvature and mass-drift checks for a set of volume *v*.

    :param v: Target volume setting the length scale ``v^(1/N)``; defaults to the set's volume.
    """
    if dset.cells == 0:
        raise IsoresInputError("Diagnostics need a nonempty set", field="E")
    grid = dset.grid
    vol = dset.volume if v is None else v
    scale = vol ** (1 / grid.dim)
    warnings: list[str] = []

    components = count_components(dset.mask)
    components_ok = components <= constants.I0
    if not components_ok:
        warnings.append(f"set has {components} components (expected at most {constants.I0})")

    diameter = set_diameter(grid, dset.mask)
    diameter_ok = diameter <= constants.d0 * scale
    if not diameter_ok:
        warnings.append(f"diameter {diameter:.4g} exceeds d0 v^(1/N) = {constants.d0 * scale:.4g}")

    radius = max(constants.r0 * scale, 2 * grid.pitch)
    density_min = _density(dset, radius)
    density_ok = density_min is not None and density_min >= constants.c0
    if not density_ok:
        warnings.append("lower density estimate fails at a boundary cell")

    curv = _curvature(dset)
    bound = constants.penalty(vol)
    c_mean: float | None = None
    c_spread: float | None = None
    c_max: float | None = None
    if curv.size:
        c_mean, c_spread, c_max = float(curv.mean()), float(curv.std()), float(np.abs(curv).max())
        if c_max > bound:
            warnings.append(f"max |H| = {c_max:.4g} above Lambda0 v^(-1/N) = {bound:.4g}")

    barycenter = grid.centers(np.nonzero(dset.mask)).mean(axis=0)
    drift = float(np.linalg.norm(barycenter - grid.center)) / scale
    touches = _touches_window(dset)
    body = grid.body
    no_minimizer = isinstance(body, SupportOracle) and body.strictly_convex and body.recession_hint is not None
    drift_flagged = bool(no_minimizer and (touches or drift > 0.5 * grid.window_multiple))
    if drift_flagged:
        warnings.append(f"mass drifts along the obstacle (drift {drift:.3g} v^(1/N))")

    for w in warnings:
        logger.warning(w)
    return Diagnostics(
        components=components,
        components_ok=components_ok,
        diameter=diameter,
        diameter_ok=diameter_ok,
        density_min=density_min,
        density_ok=density_ok,
        curvature_mean=c_mean,
        curvature_spread=c_spread,
        curvature_max=c_max,
        curvature_bound=bound,
        barycenter=barycenter,
        mass_drift=drift,
        drift_flagged=drift_flagged,
        touches_window=touches,
        warnings=warnings,
    )


def lambda_violations(dset: DiscreteSet, penalty: float, checks: int, seed: int = 0) -> int:
    """Count random local perturbations ``F`` with ``P(E) > P(F) + penalty * ||F| - |E||``.

    Each perturbation adds or removes the free cells in a small ball around
    a random boundary cell; perimeters are relative to the obstacle.
    """
    if checks <= 0:
        return 0
    grid = dset.grid
    rng = np.random.default_rng(seed)
    edge = np.flatnonzero(boundary_cells(dset).reshape(-1))
    if edge.size == 0:
        return 0
    base_classes = dset.classes()
    base, _ = perimeter_split(base_classes, grid.pitch)
    reach = int(LAMBDA_FLIP_RADIUS)
    box = itertools.product(range(-reach, reach + 1), repeat=grid.dim)
    offsets = np.array([o for o in box if sum(c * c for c in o) <= LAMBDA_FLIP_RADIUS**2])
    upper = np.array(grid.shape)
    violations = 0
    for i in range(checks):
        cell = np.unravel_index(int(rng.choice(edge)), grid.shape)
        idx = np.array(cell) + offsets
        idx = idx[np.all((idx >= 0) & (idx < upper), axis=1)]
        ball = np.zeros(grid.shape, dtype=bool)
        ball[tuple(idx.T)] = True
        if i % 2 == 0:
            changed = ball & (grid.labels == FREE) & ~dset.mask
            new_mask = dset.mask | changed
        else:
            changed = ball & dset.mask
            new_mask = dset.mask & ~changed
        if not changed.any() or not new_mask.any():
            continue
        classes = grid.labels.copy()
        classes[new_mask] = IN_SET
        perturbed, _ = perimeter_split(classes, grid.pitch)
        if base > perturbed + penalty * int(changed.sum()) * grid.cell_volume + 1e-9 * base:
            violations += 1
    return violations


def envelopment(dset: DiscreteSet) -> int:
    """Largest number, over the axes, of obstacle slices whose in-slice neighbours all belong to the set."""
    classes = dset.classes()
    best = 0
    for axis in range(classes.ndim):
        count = 0
        for i in range(classes.shape[axis]):
            sl = np.take(classes, i, axis=axis)
            obstacle = sl == OBSTACLE
            if not obstacle.any():
                continue
            ring = ndimage.binary_dilation(obstacle, structure=_face_structure(sl.ndim), border_value=0) & ~obstacle
            if ring.any() and np.all(sl[ring] == IN_SET):
                count += 1
        best = max(best, count)
    return best


def asymmetry_deficit(dset: DiscreteSet, seed: int = 0) -> Asymmetry:
    """Fraenkel asymmetry, isoperimetric deficit and the optimal ball center.

    The asymmetry ``2 (1 - |E ∩ B(x)| / |E|)`` is minimized over ``x`` by
    coordinate descent from the barycenter and from perturbed starts, with
    cells weighted by their approximate overlap with the ball. The deficit
    uses the full perimeter, obstacle faces included.
    """
    if dset.cells == 0:
        raise IsoresInputError("Asymmetry needs a nonempty set", field="E")
    grid = dset.grid
    v = dset.volume
    rho = ball_radius(v, grid.dim)
    h = grid.pitch
    pts = grid.centers(np.nonzero(dset.mask))
    tree = cKDTree(pts)

    def overlap(x: FloatArray) -> float:
        near = tree.query_ball_point(x, rho + h)
        if not near:
            return 0.0
        d = np.linalg.norm(pts[near] - x, axis=1)
        return float(np.clip((rho - d) / h + 0.5, 0.0, 1.0).sum()) * grid.cell_volume

    def descend(x0: FloatArray) -> tuple[float, FloatArray]:
        x = x0.copy()
        value = overlap(x)
        step = rho / 4
        while step >= h / 8:
            moved = False
            for axis in range(grid.dim):
                for sign in (1.0, -1.0):
                    trial = x.copy()
                    trial[axis] += sign * step
                    tv = overlap(trial)
                    if tv > value:
                        x, value, moved = trial, tv, True
            if not moved:
                step /= 2
        return value, x

    rng = np.random.default_rng(seed)
    bary = pts.mean(axis=0)
    starts = [bary] + [bary + rng.normal(scale=rho / 4, size=grid.dim) for _ in range(ASYMMETRY_SEEDS)]
    best_value, best_x = max((descend(s) for s in starts), key=lambda r: r[0])
    asym = float(min(2.0, max(0.0, 2.0 * (1.0 - best_value / v))))
    deficit = full_perimeter(dset) / profile_free(v, grid.dim) - 1.0
    return Asymmetry(asym, deficit, best_x)


def _sphere_samples(dim: int, count: int) -> FloatArray:
    if dim == 2:
        t = np.linspace(0.0, 2 * math.pi, count, endpoint=False)
        return np.stack([np.cos(t), np.sin(t)], axis=1)
    i = np.arange(count) + 0.5
    z = 1 - 2 * i / count
    phi = math.pi * (3 - math.sqrt(5)) * i
    r = np.sqrt(1 - z * z)
    return np.stack([r * np.cos(phi), r * np.sin(phi), z], axis=1)


def hausdorff_to_ball(dset: DiscreteSet, center: FloatArray) -> float | None:
    """Hausdorff distance between the free boundary of the set and ``∂B^{(v)}(center)``, over ``v^(1/N)``.

    Boundary cells touching the obstacle and sphere points inside it are
    left out; ``None`` when no free boundary remains.
    """
    grid = dset.grid
    v = dset.volume
    rho = ball_radius(v, grid.dim)
    edge = boundary_cells(dset) & ~_touching(dset.mask, grid.labels == OBSTACLE)
    pts = grid.centers(np.nonzero(edge))
    if pts.shape[0] == 0:
        return None
    c = np.asarray(center, dtype=np.float64)
    to_sphere = float(np.abs(np.linalg.norm(pts - c, axis=1) - rho).max())
    sphere = c + rho * _sphere_samples(grid.dim, 256 if grid.dim == 2 else 1024)
    if grid.body is not None:
        sphere = sphere[~grid.body.contains_points(sphere)]
    to_set = float(cKDTree(pts).query(sphere)[0].max()) if sphere.shape[0] else 0.0
    return max(to_sphere, to_set) / v ** (1 / grid.dim)
