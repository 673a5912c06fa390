from __future__ import annotations

import logging

import numpy as np
import numpy.typing as npt
from scipy.spatial import cKDTree

from ..config.constants import UNIT_TOL
from ..errors.exceptions import DisjointWindowError, IsoresInputError, ResolutionError
from .bodies import (
    BoolArray,
    ConvexBody,
    CylinderBody,
    FloatArray,
    HalfSpace,
    HPolyhedron,
    SupportOracle,
    as_points,
    check_orthonormal,
)
from .polyhedra import chebyshev_ball, from_generators, to_generators

logger = logging.getLogger("isores")

_MAX_LATTICE_POINTS = 8_000_000
_PROJECTION_DIRECTIONS = 64


def contains(body: ConvexBody, x: npt.ArrayLike) -> bool:
    """Whether the single point *x* lies in *body* (polyhedra use the body's constraint slack)."""
    pts = as_points(x, body.dim)
    if pts.shape[0] != 1:
        raise IsoresInputError("contains() takes a single point; use contains_points()", field="x")
    return bool(body.contains_points(pts)[0])


def contains_points(body: ConvexBody | None, points: npt.ArrayLike, dim: int | None = None) -> BoolArray:
    """Vectorized membership; ``None`` stands for the empty obstacle."""
    if body is None:
        if dim is None:
            raise IsoresInputError("dim is required when body is None", field="dim")
        return np.zeros(as_points(points, dim).shape[0], dtype=bool)
    return body.contains_points(as_points(points, body.dim))


def support(body: ConvexBody, u: npt.ArrayLike, unit_tol: float = UNIT_TOL) -> float:
    """``sup {<x, u> : x in C}``, ``inf`` along unbounded directions."""
    direction = np.asarray(u, dtype=np.float64).reshape(-1)
    if direction.shape[0] != body.dim:
        raise IsoresInputError(f"Direction has dimension {direction.shape[0]}, body has {body.dim}", field="u")
    if abs(float(np.linalg.norm(direction)) - 1.0) > unit_tol:
        raise IsoresInputError("Support direction must have unit norm", field="u")
    return body.support(direction)


def translate_scale(body: ConvexBody, x: npt.ArrayLike, lam: float) -> ConvexBody:
    """The body ``lam * (C - x)``."""
    if lam <= 0:
        raise IsoresInputError("Scale factor must be positive", field="lam")
    shift = np.asarray(x, dtype=np.float64).reshape(-1)
    if shift.shape[0] != body.dim:
        raise IsoresInputError("Translation dimension mismatch", field="x")

    match body:
        case HPolyhedron():
            return HPolyhedron(body.A, lam * (body.b - body.A @ shift), body.slack)
        case HalfSpace():
            return HalfSpace(body.normal, lam * (body.offset - float(body.normal @ shift)), body.slack)
        case CylinderBody():
            cs = body.cross_section
            moved = HPolyhedron(cs.A, lam * (cs.b - cs.A @ (body.perp_basis @ shift)), cs.slack)
            return CylinderBody(body.z_basis, body.perp_basis, moved)
        case SupportOracle():
            return _scaled_oracle(body, shift, lam)
    raise IsoresInputError(f"Unsupported body type {type(body).__name__}")


def _scaled_oracle(body: SupportOracle, shift: FloatArray, lam: float) -> SupportOracle:
    inner = body

    def support_fn(u: FloatArray) -> float:
        return lam * (inner.support(u) - float(shift @ u))

    def membership_fn(points: FloatArray) -> BoolArray:
        return inner.contains_points(points / lam + shift)

    poly = inner.polyhedron
    return SupportOracle(
        inner.dim,
        support_fn,
        membership_fn,
        lam * (inner.interior_point - shift),
        name=inner.name,
        recession_hint=inner.recession_hint,
        strictly_convex=inner.strictly_convex,
        polyhedron=None if poly is None else HPolyhedron(poly.A, lam * (poly.b - poly.A @ shift), poly.slack),
    )


def rigid_motion(body: ConvexBody, rotation: npt.ArrayLike, shift: npt.ArrayLike) -> ConvexBody:
    """The body ``Q C + t`` for an orthogonal ``Q``."""
    Q = np.asarray(rotation, dtype=np.float64)
    t = np.asarray(shift, dtype=np.float64).reshape(-1)
    if Q.shape != (body.dim, body.dim) or t.shape[0] != body.dim:
        raise IsoresInputError("Rotation and shift must match the body dimension", field="rotation")
    check_orthonormal(Q)

    match body:
        case HPolyhedron():
            A = body.A @ Q.T
            return HPolyhedron(A, body.b + A @ t, body.slack)
        case HalfSpace():
            normal = Q @ body.normal
            return HalfSpace(normal, body.offset + float(normal @ t), body.slack)
        case CylinderBody():
            perp = body.perp_basis @ Q.T
            cs = body.cross_section
            moved = HPolyhedron(cs.A, cs.b + cs.A @ (perp @ t), cs.slack)
            return CylinderBody(body.z_basis @ Q.T, perp, moved)
        case SupportOracle():
            inner = body

            def support_fn(u: FloatArray) -> float:
                return inner.support(Q.T @ u) + float(u @ t)

            def membership_fn(points: FloatArray) -> BoolArray:
                return inner.contains_points((points - t) @ Q)

            hint = None if inner.recession_hint is None else Q @ inner.recession_hint
            poly = inner.polyhedron
            return SupportOracle(
                inner.dim,
                support_fn,
                membership_fn,
                Q @ inner.interior_point + t,
                name=inner.name,
                recession_hint=hint,
                strictly_convex=inner.strictly_convex,
                polyhedron=None if poly is None else HPolyhedron(poly.A @ Q.T, poly.b + poly.A @ Q.T @ t, poly.slack),
            )
    raise IsoresInputError(f"Unsupported body type {type(body).__name__}")


def _sphere_directions(k: int, count: int, seed: int = 0) -> FloatArray:
    if k == 1:
        return np.array([[1.0], [-1.0]])
    rng = np.random.default_rng(seed)
    dirs = rng.normal(size=(count, k))
    dirs /= np.linalg.norm(dirs, axis=1, keepdims=True)
    eye = np.eye(k)
    return np.vstack([eye, -eye, dirs])


def project(body: ConvexBody, basis: npt.ArrayLike) -> ConvexBody:
    """Orthogonal projection onto span(*basis*), in the coordinates of *basis*.

    Polyhedral bodies project exactly (vertices and rays, then back to
    inequalities); oracles get ``h'(w) = h(U^T w)`` and a membership test
    built from sampled support values.
    """
    U = np.array(basis, dtype=np.float64, ndmin=2)
    if U.shape[1] != body.dim:
        raise IsoresInputError("Basis dimension mismatch", field="basis")
    check_orthonormal(U)

    if isinstance(body, SupportOracle) and body.polyhedron is not None:
        return project(body.polyhedron, U)
    if not isinstance(body, SupportOracle):
        gens = to_generators(body.as_polyhedron())
        vertices = gens.vertices @ U.T
        rays = gens.rays @ U.T
        norms = np.linalg.norm(rays, axis=1) if rays.size else np.zeros(0)
        rays = rays[norms > 1e-9] / norms[norms > 1e-9, None] if rays.size else rays
        return from_generators(vertices, rays.reshape(-1, U.shape[0]))

    inner = body
    k = U.shape[0]
    directions = _sphere_directions(k, _PROJECTION_DIRECTIONS * k)
    values = np.array([inner.support(U.T @ w) for w in directions])
    finite = np.isfinite(values)

    def support_fn(w: FloatArray) -> float:
        return inner.support(U.T @ w)

    def membership_fn(points: FloatArray) -> BoolArray:
        if not finite.any():
            return np.ones(points.shape[0], dtype=bool)
        return np.all(points @ directions[finite].T <= values[finite] + 1e-9, axis=1)

    return SupportOracle(k, support_fn, membership_fn, U @ inner.interior_point, name=f"{inner.name}-projection")


def lattice_points(dim: int, radius: float, pitch: float, center: FloatArray | None = None) -> FloatArray:
    """Cell centers of a pitch-*pitch* lattice inside ``B_radius(center)``."""
    if pitch <= 0 or radius <= 0:
        raise IsoresInputError("Radius and pitch must be positive")
    n = int(np.floor(radius / pitch))
    if (2 * n + 1) ** dim > _MAX_LATTICE_POINTS:
        raise ResolutionError(f"Lattice too fine: {(2 * n + 1) ** dim} points", cells=2 * n + 1)
    axis = np.arange(-n, n + 1) * pitch
    mesh = np.stack(np.meshgrid(*([axis] * dim), indexing="ij"), axis=-1).reshape(-1, dim)
    mesh = mesh[np.sum(mesh**2, axis=1) <= radius**2]
    if center is not None:
        mesh = mesh + center
    return np.asarray(mesh, dtype=np.float64)


def local_hausdorff(
    body_a: ConvexBody,
    body_b: ConvexBody,
    radius: float,
    pitch: float,
    center: npt.ArrayLike | None = None,
) -> float:
    """Two-sided Hausdorff distance between ``A ∩ B_R`` and ``B ∩ B_R`` on a sample lattice.

    The grid error is at most ``2 * pitch * sqrt(N)``.
    """
    if body_a.dim != body_b.dim:
        raise IsoresInputError("Bodies have different dimensions")
    c = None if center is None else np.asarray(center, dtype=np.float64)
    nodes = lattice_points(body_a.dim, radius, pitch, c)
    pts_a = nodes[body_a.contains_points(nodes)]
    pts_b = nodes[body_b.contains_points(nodes)]
    if pts_a.shape[0] == 0 or pts_b.shape[0] == 0:
        raise DisjointWindowError(f"Body is disjoint from the sample window of radius {radius}")
    logger.debug("Hausdorff lattice: %d in A, %d in B (pitch %.3g)", pts_a.shape[0], pts_b.shape[0], pitch)
    d_ab = cKDTree(pts_b).query(pts_a)[0]
    d_ba = cKDTree(pts_a).query(pts_b)[0]
    return float(max(d_ab.max(), d_ba.max()))


def _exit_point(body: ConvexBody, start: FloatArray, direction: FloatArray, far: float = 1e6) -> FloatArray | None:
    """Last point of *body* on the ray ``start + t * direction`` (``start`` inside), or ``None`` if unbounded."""
    if body.contains_points((start + far * direction)[None, :])[0]:
        return None
    lo, hi = 0.0, far
    for _ in range(80):
        mid = 0.5 * (lo + hi)
        if body.contains_points((start + mid * direction)[None, :])[0]:
            lo = mid
        else:
            hi = mid
    return start + lo * direction


def anchor_point(body: ConvexBody | None, dim: int) -> FloatArray:
    """A boundary point of *body* near the origin, used to center solver windows.

    For polyhedral bodies containing the origin this is the foot of the
    nearest facet; otherwise the first body point on the segment from the
    origin to an interior point.
    """
    origin = np.zeros(dim)
    if body is None:
        return origin
    if isinstance(body, HalfSpace):
        return np.asarray(body.offset * body.normal, dtype=np.float64)
    if isinstance(body, HPolyhedron | CylinderBody):
        poly = body.as_polyhedron()
        if poly.contains_points(origin[None, :])[0]:
            i = int(np.argmin(poly.b))
            return np.asarray(poly.b[i] * poly.A[i], dtype=np.float64)
        _, inner = chebyshev_ball(poly)
        ac = poly.A @ inner
        entering = ac < 0
        t0 = float(np.max(poly.b[entering] / ac[entering])) if entering.any() else 0.0
        return np.asarray(max(t0, 0.0) * inner, dtype=np.float64)

    inner = body.interior_point
    if body.contains_points(origin[None, :])[0]:
        candidates = [-body.recession_hint] if body.recession_hint is not None else []
        candidates += [s * e for e in np.eye(dim) for s in (1.0, -1.0)]
        exits = [p for p in (_exit_point(body, origin, d) for d in candidates) if p is not None]
        if not exits:
            return origin
        return min(exits, key=lambda p: float(np.linalg.norm(p)))
    direction = origin - inner
    norm = float(np.linalg.norm(direction))
    exit_point = _exit_point(body, inner, direction / norm, far=norm)
    return origin if exit_point is None else exit_point


def boundary_normal(body: ConvexBody, point: npt.ArrayLike, tol: float = 1e-7) -> tuple[FloatArray, bool]:
    """Outward unit normal of *body* at the boundary point *point*.

    The flag is true when the point lies on exactly one facet (a flat
    piece of boundary). Oracle bodies without a polyhedral form get the
    direction away from their interior point and are never flat.
    """
    x = np.asarray(point, dtype=np.float64).reshape(-1)
    if isinstance(body, SupportOracle) and body.polyhedron is not None:
        return boundary_normal(body.polyhedron, x, tol)
    if isinstance(body, HalfSpace):
        return np.asarray(body.normal, dtype=np.float64), True
    if isinstance(body, HPolyhedron | CylinderBody):
        poly = body.as_polyhedron()
        tight = np.abs(poly.A @ x - poly.b) <= tol * max(1.0, float(np.linalg.norm(x)))
        if tight.any():
            normals = np.unique(np.round(poly.A[tight], 12), axis=0)
            n = normals.sum(axis=0)
            return n / np.linalg.norm(n), normals.shape[0] == 1
    inner = body.interior_point if isinstance(body, SupportOracle) else chebyshev_ball(body.as_polyhedron())[1]
    d = x - inner
    norm = float(np.linalg.norm(d))
    if norm == 0:
        raise IsoresInputError("Point coincides with the interior point", field="point")
    return d / norm, False


__all__ = [
    "anchor_point",
    "boundary_normal",
    "contains",
    "contains_points",
    "lattice_points",
    "local_hausdorff",
    "project",
    "rigid_motion",
    "support",
    "translate_scale",
]
