from __future__ import annotations

from collections.abc import Callable
from dataclasses import dataclass, field
from typing import TypeAlias

import numpy as np
import numpy.typing as npt

from ..config.constants import MAX_DIMENSION, MEMBERSHIP_SLACK, MIN_DIMENSION, ORTHONORMAL_TOL
from ..errors.exceptions import DegenerateBodyError, IsoresInputError

FloatArray: TypeAlias = npt.NDArray[np.float64]
BoolArray: TypeAlias = npt.NDArray[np.bool_]

SupportFn = Callable[[FloatArray], float]
MembershipFn = Callable[[FloatArray], BoolArray]


def _frozen(values: npt.ArrayLike, ndim: int) -> FloatArray:
    arr = np.array(values, dtype=np.float64, ndmin=ndim)
    if not np.all(np.isfinite(arr)):
        raise IsoresInputError("Coordinates must be finite")
    arr.setflags(write=False)
    return arr


def as_points(points: npt.ArrayLike, dim: int) -> FloatArray:
    """Coerce *points* to a ``(M, dim)`` float array, raising on a dimension mismatch."""
    arr = np.asarray(points, dtype=np.float64)
    if arr.ndim == 1:
        arr = arr[None, :]
    if arr.ndim != 2 or arr.shape[1] != dim:
        raise IsoresInputError(f"Expected points of dimension {dim}, got shape {arr.shape}", field="x")
    return arr


def check_dimension(dim: int) -> None:
    if not MIN_DIMENSION <= dim <= MAX_DIMENSION:
        raise IsoresInputError(f"Dimension {dim} outside [{MIN_DIMENSION}, {MAX_DIMENSION}]", field="dim")


def check_orthonormal(basis: FloatArray, tol: float = ORTHONORMAL_TOL) -> None:
    gram = basis @ basis.T
    if not np.allclose(gram, np.eye(basis.shape[0]), atol=max(tol, 1e-12) * 10):
        raise IsoresInputError("Basis vectors are not orthonormal", field="basis")


@dataclass(frozen=True, eq=False)
class HPolyhedron:
    """Polyhedron ``{x : A x <= b}`` with unit-norm constraint rows.

    The plain constructor only normalizes rows; it is used for cones,
    projections and other derived sets that may have empty interior.
    Obstacles are built through :meth:`from_inequalities`, which also
    checks that the feasible region has nonempty interior and is not all
    of ``R^N``.
    """

    A: FloatArray
    b: FloatArray
    slack: float = MEMBERSHIP_SLACK

    def __post_init__(self) -> None:
        A = np.array(self.A, dtype=np.float64, ndmin=2)
        b = np.array(self.b, dtype=np.float64, ndmin=1).reshape(-1)
        if A.shape[0] != b.shape[0]:
            raise IsoresInputError(f"A has {A.shape[0]} rows but b has {b.shape[0]} entries", field="b")
        if A.shape[0]:
            norms = np.linalg.norm(A, axis=1)
            if np.any(norms == 0):
                raise IsoresInputError("One of the rows of A is a zero vector", field="A")
            A = A / norms[:, None]
            b = b / norms
        A.setflags(write=False)
        b.setflags(write=False)
        object.__setattr__(self, "A", A)
        object.__setattr__(self, "b", b)

    @classmethod
    def from_inequalities(
        cls, A: npt.ArrayLike, b: npt.ArrayLike, *, slack: float = MEMBERSHIP_SLACK
    ) -> HPolyhedron:
        from .polyhedra import chebyshev_ball

        poly = cls(np.asarray(A, dtype=np.float64), np.asarray(b, dtype=np.float64), slack)
        check_dimension(poly.dim)
        if poly.n_constraints == 0:
            raise DegenerateBodyError("A polyhedron without constraints is all of R^N")
        radius, _ = chebyshev_ball(poly)
        if radius <= slack:
            raise DegenerateBodyError(f"Polyhedron has empty interior (Chebyshev radius {radius:.3e})")
        return poly

    @property
    def dim(self) -> int:
        return int(self.A.shape[1])

    @property
    def n_constraints(self) -> int:
        return int(self.A.shape[0])

    def contains_points(self, points: FloatArray) -> BoolArray:
        if self.n_constraints == 0:
            return np.ones(points.shape[0], dtype=bool)
        return np.all(points @ self.A.T <= self.b + self.slack, axis=1)

    def support(self, u: FloatArray) -> float:
        from .polyhedra import polyhedron_support

        return polyhedron_support(self, u)

    def as_polyhedron(self) -> HPolyhedron:
        return self


@dataclass(frozen=True, eq=False)
class HalfSpace:
    """Half-space ``{x : <normal, x> <= offset}``; ``normal`` is stored with unit norm."""

    normal: FloatArray
    offset: float
    slack: float = MEMBERSHIP_SLACK

    def __post_init__(self) -> None:
        normal = np.array(self.normal, dtype=np.float64).reshape(-1)
        norm = float(np.linalg.norm(normal))
        if norm == 0:
            raise IsoresInputError("Half-space normal must be nonzero", field="normal")
        check_dimension(normal.shape[0])
        normal = normal / norm
        normal.setflags(write=False)
        object.__setattr__(self, "normal", normal)
        object.__setattr__(self, "offset", float(self.offset) / norm)

    @property
    def dim(self) -> int:
        return int(self.normal.shape[0])

    def contains_points(self, points: FloatArray) -> BoolArray:
        return points @ self.normal <= self.offset + self.slack

    def support(self, u: FloatArray) -> float:
        if np.allclose(u, self.normal, atol=1e-12):
            return self.offset
        return float("inf")

    def as_polyhedron(self) -> HPolyhedron:
        return HPolyhedron(self.normal[None, :], np.array([self.offset]), self.slack)


@dataclass(frozen=True, eq=False)
class CylinderBody:
    """Convex cylinder ``Z + D``.

    :param z_basis: ``(k, N)`` orthonormal rows spanning ``Z``.
    :param perp_basis: ``(N - k, N)`` orthonormal rows spanning ``Z^perp``;
        the cross-section lives in these coordinates.
    :param cross_section: Bounded polyhedron ``D`` in ``Z^perp`` coordinates.
    """

    z_basis: FloatArray
    perp_basis: FloatArray
    cross_section: HPolyhedron

    def __post_init__(self) -> None:
        z = np.array(self.z_basis, dtype=np.float64, ndmin=2)
        p = np.array(self.perp_basis, dtype=np.float64, ndmin=2)
        if z.size == 0:
            z = np.zeros((0, p.shape[1]))
        full = np.vstack([z, p])
        if full.shape[0] != full.shape[1]:
            raise IsoresInputError("Z and Z^perp bases must together span R^N", field="z_basis")
        check_dimension(full.shape[1])
        check_orthonormal(full)
        if self.cross_section.dim != p.shape[0]:
            raise IsoresInputError("Cross-section dimension must equal dim Z^perp", field="cross_section")
        from .polyhedra import is_bounded

        if not is_bounded(self.cross_section):
            raise DegenerateBodyError("Cylinder cross-section must be bounded")
        z.setflags(write=False)
        p.setflags(write=False)
        object.__setattr__(self, "z_basis", z)
        object.__setattr__(self, "perp_basis", p)

    @classmethod
    def axis_aligned(cls, dim: int, z_axes: list[int], cross_section: HPolyhedron) -> CylinderBody:
        """Cylinder whose ``Z`` is spanned by coordinate axes *z_axes*; D lives in the remaining axes (in order)."""
        eye = np.eye(dim)
        perp_axes = [i for i in range(dim) if i not in z_axes]
        return cls(eye[z_axes], eye[perp_axes], cross_section)

    @property
    def dim(self) -> int:
        return int(self.perp_basis.shape[1])

    @property
    def k(self) -> int:
        return int(self.z_basis.shape[0])

    def contains_points(self, points: FloatArray) -> BoolArray:
        return self.cross_section.contains_points(points @ self.perp_basis.T)

    def support(self, u: FloatArray) -> float:
        if self.k and np.linalg.norm(self.z_basis @ u) > 1e-12:
            return float("inf")
        w = self.perp_basis @ u
        norm = float(np.linalg.norm(w))
        return norm * self.cross_section.support(w / norm)

    def as_polyhedron(self) -> HPolyhedron:
        cs = self.cross_section
        return HPolyhedron(cs.A @ self.perp_basis, cs.b, cs.slack)


@dataclass(frozen=True, eq=False)
class SupportOracle:
    """Convex body known only through callbacks.

    ``support`` maps a unit direction to ``h_C(u)`` (``inf`` allowed) and
    ``membership`` maps an ``(M, N)`` point array to a boolean mask. Both
    callbacks must be reentrant.

    :param interior_point: A point known to lie in ``C``.
    :param recession_hint: A unit recession direction, when known.
    :param strictly_convex: Whether ``C`` is strictly convex (no flat facets).
    """

    dim: int
    support_fn: SupportFn
    membership_fn: MembershipFn
    interior_point: FloatArray
    name: str = "oracle"
    recession_hint: FloatArray | None = None
    strictly_convex: bool = False
    polyhedron: HPolyhedron | None = field(default=None, repr=False)

    def __post_init__(self) -> None:
        check_dimension(self.dim)
        object.__setattr__(self, "interior_point", _frozen(self.interior_point, 1))
        if self.recession_hint is not None:
            hint = np.asarray(self.recession_hint, dtype=np.float64)
            object.__setattr__(self, "recession_hint", _frozen(hint / np.linalg.norm(hint), 1))

    def contains_points(self, points: FloatArray) -> BoolArray:
        return np.asarray(self.membership_fn(points), dtype=bool)

    def support(self, u: FloatArray) -> float:
        return float(self.support_fn(u))

    def check_sublinear(self, samples: int = 32, seed: int = 0, tol: float = 1e-7) -> int:
        """Spot-check ``h(u + w) <= h(u) + h(w)`` on random pairs; returns the number of violations."""
        rng = np.random.default_rng(seed)
        violations = 0
        for _ in range(samples):
            u, w = rng.normal(size=(2, self.dim))
            u /= np.linalg.norm(u)
            w /= np.linalg.norm(w)
            s = u + w
            norm = float(np.linalg.norm(s))
            if norm < 1e-9:
                continue
            lhs = norm * self.support(s / norm)
            rhs = self.support(u) + self.support(w)
            if np.isfinite(lhs) and lhs > rhs + tol * max(1.0, abs(rhs)):
                violations += 1
        return violations

    def require_sublinear(self, samples: int = 32) -> SupportOracle:
        """Return ``self`` once :meth:`check_sublinear` finds no violation.

        :raises IsoresInputError: Some sampled pair breaks subadditivity.
        """
        violations = self.check_sublinear(samples)
        if violations:
            raise IsoresInputError(
                f"Support function of {self.name} is not sublinear on {violations} of {samples} pairs", field="support"
            )
        return self


ConvexBody: TypeAlias = HPolyhedron | HalfSpace | CylinderBody | SupportOracle
PolyhedralBody: TypeAlias = HPolyhedron | HalfSpace | CylinderBody


def is_polyhedral(body: ConvexBody) -> bool:
    return isinstance(body, HPolyhedron | HalfSpace | CylinderBody)


# -- oracle factories --------------------------------------------------------


def paraboloid(dim: int, scale: float = 1.0) -> SupportOracle:
    """``{x : x_N >= scale * |x'|^2}`` as a support oracle."""

    def support(u: FloatArray) -> float:
        un = float(u[-1])
        rest = float(np.dot(u[:-1], u[:-1]))
        if un >= 0:
            return float("inf")
        return rest / (-4.0 * un * scale)

    def membership(points: FloatArray) -> BoolArray:
        return points[:, -1] >= scale * np.sum(points[:, :-1] ** 2, axis=1) - MEMBERSHIP_SLACK

    interior = np.zeros(dim)
    interior[-1] = 1.0
    hint = np.zeros(dim)
    hint[-1] = 1.0
    return SupportOracle(
        dim, support, membership, interior, name="paraboloid", recession_hint=hint, strictly_convex=True
    )


def ball(center: npt.ArrayLike, radius: float) -> SupportOracle:
    """Closed Euclidean ball as a support oracle."""
    c = np.asarray(center, dtype=np.float64)
    if radius <= 0:
        raise IsoresInputError("Ball radius must be positive", field="radius")

    def support(u: FloatArray) -> float:
        return float(np.dot(c, u)) + radius

    def membership(points: FloatArray) -> BoolArray:
        return np.sum((points - c) ** 2, axis=1) <= radius**2 + MEMBERSHIP_SLACK

    return SupportOracle(c.shape[0], support, membership, c, name="ball", strictly_convex=True)


def oracle_from_polyhedron(poly: HPolyhedron, name: str = "oracle-grid") -> SupportOracle:
    """Expose a polyhedron through the oracle interface (LP support, inequality membership)."""
    from .polyhedra import chebyshev_ball

    _, center = chebyshev_ball(poly)
    oracle = SupportOracle(poly.dim, poly.support, poly.contains_points, center, name=name, polyhedron=poly)
    return oracle.require_sublinear()
