from __future__ import annotations

import logging
from dataclasses import dataclass, field

import numpy as np

from ..config.constants import MEMBERSHIP_SLACK, RANK_GAP_WARNING, RANK_REL_TOL
from ..errors.exceptions import IsoresInputError, NoDecompositionError
from ..geometry.bodies import CylinderBody, FloatArray, HPolyhedron, PolyhedralBody
from ..geometry.operations import lattice_points, local_hausdorff, project, translate_scale
from ..geometry.polyhedra import complement_basis, cone_generators, is_bounded, sample_points, to_generators

logger = logging.getLogger("isores")


@dataclass(frozen=True, eq=False)
class DstarResult:
    """Numerical rank of the recession cone.

    :param basis: Orthonormal rows spanning ``span(C_inf)``.
    :param ambiguous: The singular-value gap at the rank cut is below the warning ratio.
    """

    dim: int
    dstar: int
    singular_values: FloatArray
    rays: FloatArray
    basis: FloatArray
    ambiguous: bool = False
    warnings: list[str] = field(default_factory=list)


@dataclass(frozen=True, eq=False)
class StructureDecomposition:
    """``C ⊆ Z + D`` with ``D = cl p_{Z^perp}(C)`` bounded."""

    dstar: int
    z_basis: FloatArray
    perp_basis: FloatArray
    cross_section: HPolyhedron
    containment_violations: int
    bounded: bool

    @property
    def cylinder(self) -> CylinderBody:
        return CylinderBody(self.z_basis, self.perp_basis, self.cross_section)


def recession_generators(body: PolyhedralBody) -> tuple[FloatArray, FloatArray]:
    """Extreme rays and lineality basis of ``{d : A d <= 0}``."""
    poly = body.as_polyhedron()
    return cone_generators(poly.A)


def dstar_polyhedral(body: PolyhedralBody, rel_tol: float = RANK_REL_TOL) -> DstarResult:
    """``d*(C) = dim span(C_inf)`` for a polyhedral body.

    Every polyhedron is ``conv(vertices) + C_inf``, so its projection onto
    ``span(C_inf)^perp`` is bounded and the span dimension is also the
    smallest admissible ``dim Z``.
    """
    poly = body.as_polyhedron()
    rays, lineality = recession_generators(poly)
    gens = np.vstack([rays, lineality]) if lineality.size else rays
    dim = poly.dim
    if gens.shape[0] == 0:
        return DstarResult(dim, 0, np.zeros(0), rays, np.zeros((0, dim)))

    _, s, vt = np.linalg.svd(gens, full_matrices=False)
    rank = int(np.sum(s > rel_tol * s[0]))
    warnings: list[str] = []
    ambiguous = False
    if rank < s.size and s[rank] > 0 and s[rank - 1] / s[rank] < RANK_GAP_WARNING:
        ambiguous = True
        warnings.append(f"Singular value gap {s[rank - 1] / s[rank]:.3g} below {RANK_GAP_WARNING:g}")
        logger.warning("Ambiguous recession-cone rank %d (singular values %s)", rank, np.array2string(s, precision=3))
    logger.debug("Recession cone: %d rays, %d lines, rank %d", rays.shape[0], lineality.shape[0], rank)
    return DstarResult(dim, rank, s, rays, vt[:rank], ambiguous, warnings)


def structure_decompose(body: PolyhedralBody, samples: int = 1000, seed: int = 0) -> StructureDecomposition:
    """Split a polyhedral body as ``Z + D`` with ``Z = span(C_inf)``.

    Containment ``C ⊆ Z + D`` is checked on *samples* random points of
    ``C``; boundedness of ``D`` by finite support in every axis direction.
    """
    poly = body.as_polyhedron()
    result = dstar_polyhedral(poly)
    if result.dstar in (0, poly.dim):
        raise NoDecompositionError(f"d* = {result.dstar} admits no nontrivial cylinder decomposition", result.dstar)

    z_basis = result.basis
    perp_basis = complement_basis(z_basis, poly.dim)
    projected = project(poly, perp_basis)
    assert isinstance(projected, HPolyhedron)
    cross_section = HPolyhedron(projected.A, projected.b, MEMBERSHIP_SLACK)
    bounded = is_bounded(cross_section)
    if not bounded:
        raise NoDecompositionError("Projection onto Z^perp is unbounded", result.dstar)

    rng = np.random.default_rng(seed)
    points = sample_points(to_generators(poly), samples, rng)
    inside = HPolyhedron(cross_section.A, cross_section.b, 1e-7).contains_points(points @ perp_basis.T)
    violations = int(np.sum(~inside))
    if violations:
        logger.warning("%d of %d sampled points fall outside Z + D", violations, samples)
    return StructureDecomposition(result.dstar, z_basis, perp_basis, cross_section, violations, bounded)


@dataclass(frozen=True)
class RecessionLimitReport:
    lambdas: list[float]
    distances: list[float]
    nested: bool
    converging: bool


def recession_limit_check(
    body: PolyhedralBody,
    x: FloatArray,
    lambdas: list[float],
    radius: float = 1.0,
    pitch: float = 0.05,
) -> RecessionLimitReport:
    """Check that ``lambda (C - x)`` shrinks as ``lambda`` decreases and tends to ``C_inf``.

    *x* must lie in ``C``; distances are local Hausdorff distances to the
    recession cone inside ``B_radius``.
    """
    poly = body.as_polyhedron()
    x = np.asarray(x, dtype=np.float64)
    if not poly.contains_points(x[None, :])[0]:
        raise IsoresInputError("Base point must lie in the body", field="x")
    if any(b >= a for a, b in zip(lambdas, lambdas[1:], strict=False)):
        raise IsoresInputError("lambdas must be strictly decreasing", field="lambdas")
    cone = HPolyhedron(poly.A, np.zeros(poly.n_constraints), poly.slack)

    nodes = lattice_points(poly.dim, radius, pitch)
    previous: np.ndarray | None = None
    nested = True
    distances: list[float] = []
    for lam in lambdas:
        scaled = translate_scale(poly, x, lam)
        assert isinstance(scaled, HPolyhedron)
        mask = scaled.contains_points(nodes)
        if previous is not None and np.any(mask & ~previous):
            nested = False
        previous = mask
        distances.append(local_hausdorff(scaled, cone, radius, pitch))
    tol = 2 * pitch * np.sqrt(poly.dim)
    converging = all(b <= a + tol for a, b in zip(distances, distances[1:], strict=False))
    return RecessionLimitReport(list(lambdas), distances, nested, converging)
