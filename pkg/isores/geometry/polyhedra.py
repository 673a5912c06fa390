from __future__ import annotations

import logging
from dataclasses import dataclass

import cdd
import numpy as np
from scipy.linalg import null_space
from scipy.optimize import linprog

from ..config.constants import GENERATOR_SAMPLES, MAX_CONSTRAINTS, MAX_DIMENSION, SUPPORT_CHECK_TOL
from ..errors.exceptions import DegenerateBodyError, IsoresInputError
from .bodies import FloatArray, HPolyhedron

logger = logging.getLogger("isores")

_RAY_TOL = 1e-9
_CHEBYSHEV_CAP = 1e6

# pycddlib arithmetic; "fraction" is exact but slow
NUMBER_TYPE = "float"


@dataclass(frozen=True, eq=False)
class GeneratorRep:
    """Motzkin decomposition ``conv(vertices) + cone(rays)``.

    Lineality directions appear in ``rays`` with both signs.
    """

    vertices: FloatArray
    rays: FloatArray

    @property
    def dim(self) -> int:
        return int(self.vertices.shape[1])

    def support(self, u: FloatArray, tol: float = SUPPORT_CHECK_TOL) -> float:
        if self.rays.shape[0] and np.max(self.rays @ u) > tol:
            return float("inf")
        return float(np.max(self.vertices @ u))


def chebyshev_ball(poly: HPolyhedron, cap: float = _CHEBYSHEV_CAP) -> tuple[float, FloatArray]:
    """Radius and center of a maximal inscribed ball (radius capped at *cap* for unbounded sets).

    Solves ``max r  s.t.  a_i.x + r |a_i| <= b_i``; rows are unit norm so the
    ball term is ``r`` itself.
    """
    n = poly.dim
    if poly.n_constraints == 0:
        return cap, np.zeros(n)
    c = np.zeros(n + 1)
    c[-1] = -1.0
    G = np.hstack([poly.A, np.ones((poly.n_constraints, 1))])
    bounds = [(None, None)] * n + [(0.0, cap)]
    res = linprog(c, A_ub=G, b_ub=poly.b, bounds=bounds, method="highs")
    if res.status == 2:
        raise DegenerateBodyError("Polyhedron is empty")
    if res.status != 0:
        raise DegenerateBodyError(f"Chebyshev ball LP failed: {res.message}")
    return float(res.x[-1]), np.asarray(res.x[:n], dtype=np.float64)


def polyhedron_support(poly: HPolyhedron, u: FloatArray) -> float:
    if poly.n_constraints == 0:
        return float("inf")
    c = -np.asarray(u, dtype=np.float64)
    res = linprog(c, A_ub=poly.A, b_ub=poly.b, bounds=[(None, None)] * poly.dim, method="highs")
    if res.status == 3:
        return float("inf")
    if res.status == 2:
        raise DegenerateBodyError("Polyhedron is empty")
    if res.status != 0:
        raise DegenerateBodyError(f"Support LP failed: {res.message}")
    return float(-res.fun)


def is_bounded(poly: HPolyhedron) -> bool:
    eye = np.eye(poly.dim)
    return all(np.isfinite(polyhedron_support(poly, s * e)) for e in eye for s in (1.0, -1.0))


def recession_cone(poly: HPolyhedron) -> HPolyhedron:
    """``{d : A d <= 0}``: a closed convex cone containing the origin."""
    return HPolyhedron(poly.A, np.zeros(poly.n_constraints), poly.slack)


def orthonormal_span(vectors: FloatArray, rel_tol: float = 1e-8) -> FloatArray:
    if vectors.size == 0:
        return np.zeros((0, vectors.shape[-1] if vectors.ndim == 2 else 0))
    _, s, vt = np.linalg.svd(vectors, full_matrices=False)
    if s.size == 0 or s[0] == 0:
        return np.zeros((0, vectors.shape[1]))
    rank = int(np.sum(s > rel_tol * s[0]))
    return np.asarray(vt[:rank], dtype=np.float64)


def complement_basis(rows: FloatArray, dim: int) -> FloatArray:
    """Orthonormal rows spanning the orthogonal complement of span(*rows*)."""
    if rows.size == 0:
        return np.eye(dim)
    return np.asarray(null_space(np.atleast_2d(rows)).T, dtype=np.float64)


def _cdd_rows(mat: cdd.Matrix, width: int) -> tuple[FloatArray, FloatArray]:
    """Rows of a cdd matrix as ``(ordinary, linearity)`` float arrays."""
    rows = np.array([mat[i] for i in range(mat.row_size)], dtype=np.float64).reshape(-1, width)
    linear = np.zeros(rows.shape[0], dtype=bool)
    linear[sorted(mat.lin_set)] = True
    return rows[~linear], rows[linear]


def _h_to_v(A: FloatArray, b: FloatArray) -> cdd.Matrix:
    # cdd stores b - A x >= 0 as rows [b, -A]
    mat = cdd.Matrix(np.hstack([b[:, None], -A]).tolist(), number_type=NUMBER_TYPE)
    mat.rep_type = cdd.RepType.INEQUALITY
    return cdd.Polyhedron(mat).get_generators()


def _unique_rows(rows: FloatArray) -> FloatArray:
    if rows.shape[0] == 0:
        return rows
    _, index = np.unique(np.round(rows, 9), axis=0, return_index=True)
    return np.asarray(rows[np.sort(index)], dtype=np.float64)


def _unit_rays(rays: FloatArray, lineality: FloatArray, tol: float) -> FloatArray:
    """Rays with the lineality component removed, normalized and deduplicated."""
    if lineality.size:
        rays = rays - (rays @ lineality.T) @ lineality
    norms = np.linalg.norm(rays, axis=1)
    keep = norms > tol
    return _unique_rows(rays[keep] / norms[keep, None])


def cone_generators(G: FloatArray, tol: float = _RAY_TOL) -> tuple[FloatArray, FloatArray]:
    """Generators of ``{z : G z <= 0}`` as ``(extreme rays, lineality basis)``.

    Extreme rays are unit vectors orthogonal to the lineality space.
    """
    m, n = G.shape
    if m == 0:
        return np.zeros((0, n)), np.eye(n)
    ordinary, lines = _cdd_rows(_h_to_v(G, np.zeros(m)), n + 1)
    lineality = orthonormal_span(lines[:, 1:]) if lines.shape[0] else np.zeros((0, n))
    rays = ordinary[np.abs(ordinary[:, 0]) <= tol, 1:]
    return _unit_rays(rays, lineality, tol), lineality


def to_generators(poly: HPolyhedron, tol: float = _RAY_TOL, *, verify: bool = True) -> GeneratorRep:
    """Vertex/ray form of *poly*; vertices are taken in the complement of the lineality space.

    With *verify* the result is checked against *poly* on
    ``GENERATOR_SAMPLES`` random support directions and rejected past
    ``SUPPORT_CHECK_TOL`` (relative to the size of the data).
    """
    m, n = poly.A.shape
    if m > MAX_CONSTRAINTS or n > MAX_DIMENSION:
        raise IsoresInputError(f"Generator conversion limited to m <= {MAX_CONSTRAINTS}, N <= {MAX_DIMENSION}")
    if m == 0:
        raise DegenerateBodyError("A polyhedron without constraints is all of R^N")
    ordinary, lines = _cdd_rows(_h_to_v(poly.A, poly.b), n + 1)
    is_vertex = ordinary[:, 0] > tol
    if not is_vertex.any():
        raise DegenerateBodyError("Polyhedron is empty")
    lineality = orthonormal_span(lines[:, 1:]) if lines.shape[0] else np.zeros((0, n))
    vertices = ordinary[is_vertex, 1:] / ordinary[is_vertex, :1]
    if lineality.size:
        vertices = _unique_rows(vertices - (vertices @ lineality.T) @ lineality)
    pointed = _unit_rays(ordinary[~is_vertex, 1:], lineality, tol)
    all_rays = np.vstack([pointed, lineality, -lineality])
    rep = GeneratorRep(vertices=np.asarray(vertices), rays=all_rays.reshape(-1, n))
    logger.debug("Generators: %d vertices, %d rays (%d lines)", vertices.shape[0], all_rays.shape[0], len(lineality))
    if verify:
        scale = 1.0 + float(np.max(np.abs(vertices)))
        error = verify_generators(poly, rep)
        if error > SUPPORT_CHECK_TOL * scale:
            raise DegenerateBodyError(f"Generator conversion failed the support check (error {error:.3g})")
    return rep


def from_generators(vertices: FloatArray, rays: FloatArray, tol: float = _RAY_TOL) -> HPolyhedron:
    """Inequality form of ``conv(vertices) + cone(rays)``; equalities become pairs of inequalities."""
    k = vertices.shape[1]
    rows = [np.hstack([np.ones((vertices.shape[0], 1)), vertices])]
    if rays.size:
        rows.append(np.hstack([np.zeros((rays.shape[0], 1)), rays]))
    mat = cdd.Matrix(np.vstack(rows).tolist(), number_type=NUMBER_TYPE)
    mat.rep_type = cdd.RepType.GENERATOR
    ordinary, equalities = _cdd_rows(cdd.Polyhedron(mat).get_inequalities(), k + 1)
    H = np.vstack([ordinary, equalities, -equalities])
    b, A = H[:, 0], -H[:, 1:]
    keep = np.linalg.norm(A, axis=1) > tol
    return HPolyhedron(A[keep].reshape(-1, k), b[keep])


def verify_generators(
    poly: HPolyhedron,
    rep: GeneratorRep,
    samples: int = GENERATOR_SAMPLES,
    seed: int = 0,
    tol: float = SUPPORT_CHECK_TOL,
) -> float:
    """Largest support-function discrepancy between *poly* and *rep* over random directions.

    Infinite values must agree exactly; returns ``inf`` when they do not.
    """
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(samples):
        u = rng.normal(size=poly.dim)
        u /= np.linalg.norm(u)
        h_poly = poly.support(u)
        h_rep = rep.support(u, tol)
        if np.isinf(h_poly) or np.isinf(h_rep):
            if np.isinf(h_poly) != np.isinf(h_rep):
                return float("inf")
            continue
        worst = max(worst, abs(h_poly - h_rep))
    return worst


def sample_points(rep: GeneratorRep, count: int, rng: np.random.Generator, ray_scale: float = 10.0) -> FloatArray:
    """Random points of ``conv(vertices) + cone(rays)`` (Dirichlet weights on vertices, exponential ray steps)."""
    weights = rng.dirichlet(np.ones(rep.vertices.shape[0]), size=count)
    points = weights @ rep.vertices
    if rep.rays.shape[0]:
        steps = rng.exponential(ray_scale, size=(count, rep.rays.shape[0]))
        points = points + steps @ rep.rays
    return np.asarray(points, dtype=np.float64)