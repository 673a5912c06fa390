from __future__ import annotations

import logging
from collections.abc import Sequence
from dataclasses import dataclass, field

import numpy as np
import numpy.typing as npt
from scipy.spatial import cKDTree

from ..errors.exceptions import DisjointWindowError, IsoresInputError
from ..geometry.bodies import BoolArray, ConvexBody, FloatArray, SupportOracle, is_polyhedral
from ..geometry.operations import lattice_points, project
from ..geometry.polyhedra import complement_basis

logger = logging.getLogger("isores")

_ORACLE_DIRECTIONS = 64


@dataclass(frozen=True)
class SliceReport:
    """Slices ``C_t = p_{z^perp}(C ∩ (t z + z^perp))`` against ``cl p_{z^perp}(C)`` on a sample window.

    ``areas`` are ``(N-1)``-volumes inside the window and ``distances`` the
    local Hausdorff distances to the projection (``None`` for empty slices).
    """

    t_values: list[float]
    areas: list[float]
    distances: list[float | None]
    nested: bool
    monotone: bool
    converged: bool
    tolerance: float
    notes: list[str] = field(default_factory=list)


def _projection_mask(body: ConvexBody, perp: FloatArray, nodes: FloatArray, pitch: float) -> BoolArray:
    if is_polyhedral(body) or (isinstance(body, SupportOracle) and body.polyhedron is not None):
        return project(body, perp).contains_points(nodes)
    k = perp.shape[0]
    rng = np.random.default_rng(0)
    dirs = rng.normal(size=(_ORACLE_DIRECTIONS * k, k))
    dirs /= np.linalg.norm(dirs, axis=1, keepdims=True)
    eye = np.eye(k)
    dirs = np.vstack([eye, -eye, dirs])
    values = np.array([body.support(perp.T @ u) for u in dirs])
    finite = np.isfinite(values)
    if not finite.any():
        return np.ones(nodes.shape[0], dtype=bool)
    return np.all(nodes @ dirs[finite].T <= values[finite] + 1e-3 * pitch, axis=1)


def _hausdorff(a: FloatArray, b: FloatArray) -> float:
    return float(max(cKDTree(b).query(a)[0].max(), cKDTree(a).query(b)[0].max()))


def slice_check(
    body: ConvexBody,
    z: npt.ArrayLike,
    t_values: Sequence[float],
    radius: float = 2.0,
    pitch: float = 0.05,
    tol: float | None = None,
) -> SliceReport:
    """Check that slices along the recession direction *z* are nested and converge to the projection.

    :param radius: Radius of the sample window in ``z^perp``.
    :param tol: Final-distance tolerance; defaults to ``2 * pitch * sqrt(N - 1)``.
    """
    direction = np.asarray(z, dtype=np.float64).reshape(-1)
    if direction.shape[0] != body.dim:
        raise IsoresInputError("Direction dimension mismatch", field="z")
    if abs(float(np.linalg.norm(direction)) - 1.0) > 1e-9:
        raise IsoresInputError("Slice direction must have unit norm", field="z")
    ts = [float(t) for t in t_values]
    if not ts or any(b <= a for a, b in zip(ts, ts[1:], strict=False)):
        raise IsoresInputError("t_values must be nonempty and increasing", field="t_values")

    perp = complement_basis(direction[None, :], body.dim)
    k = perp.shape[0]
    nodes = lattice_points(k, radius, pitch)
    grid_tol = pitch * np.sqrt(k)
    tolerance = tol if tol is not None else 2 * grid_tol

    limit_mask = _projection_mask(body, perp, nodes, pitch)
    if not limit_mask.any():
        raise DisjointWindowError("Projection of the body misses the sample window")
    limit_pts = nodes[limit_mask]

    notes: list[str] = []
    areas: list[float] = []
    distances: list[float | None] = []
    nested = True
    previous: FloatArray | None = None
    for t in ts:
        mask = body.contains_points(t * direction + nodes @ perp)
        areas.append(float(mask.sum()) * pitch**k)
        if not mask.any():
            notes.append(f"slice at t={t:g} is empty; skipped")
            distances.append(None)
            continue
        pts = nodes[mask]
        if previous is not None:
            gap = cKDTree(pts).query(previous)[0]
            if gap.max() > grid_tol + 1e-12:
                nested = False
                notes.append(f"slice at t={t:g} does not contain the previous slice (gap {gap.max():.3g})")
        previous = pts
        distances.append(_hausdorff(pts, limit_pts))

    measured = [d for d in distances if d is not None]
    monotone = all(b <= a + 2 * grid_tol for a, b in zip(measured, measured[1:], strict=False))
    converged = bool(measured) and measured[-1] <= tolerance
    logger.debug("Slice distances %s (tolerance %.3g)", measured, tolerance)
    return SliceReport(ts, areas, distances, nested, monotone, converged, tolerance, notes)
