from __future__ import annotations

from pathlib import Path

import numpy as np
from pydantic import TypeAdapter, ValidationError

from ..errors.exceptions import IsoresInputError
from ..models.bodies import (
    BallDescription,
    BodyDescription,
    CylinderDescription,
    FreeDescription,
    HalfSpaceDescription,
    HPolyDescription,
    InequalitySet,
    OracleGridDescription,
    ParaboloidDescription,
)
from .bodies import ConvexBody, CylinderBody, HalfSpace, HPolyhedron, ball, oracle_from_polyhedron, paraboloid
from .polyhedra import complement_basis, from_generators

_adapter: TypeAdapter[BodyDescription] = TypeAdapter(BodyDescription)


def parse_body(text: str) -> BodyDescription:
    """Validate a body JSON document (an object with a ``kind`` field)."""
    try:
        return _adapter.validate_json(text)
    except ValidationError as e:
        raise IsoresInputError(f"Invalid body description: {e.error_count()} error(s)", field="body", cause=e) from e


def load_body(path: str | Path) -> tuple[BodyDescription, ConvexBody | None]:
    """Read, validate and build the body stored at *path*."""
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as e:
        raise IsoresInputError(f"Cannot read body file {path}: {e}", field="body", cause=e) from e
    desc = parse_body(text)
    return desc, build_body(desc)


def dump_body(desc: BodyDescription) -> str:
    return _adapter.dump_json(desc, indent=2).decode("utf-8")


def _cross_section(cs: InequalitySet, dim: int, slack: float) -> HPolyhedron:
    if cs.vertices is not None:
        verts = np.asarray(cs.vertices, dtype=np.float64).reshape(-1, dim)
        poly = from_generators(verts, np.zeros((0, dim)))
        return HPolyhedron.from_inequalities(poly.A, poly.b, slack=slack)
    return HPolyhedron.from_inequalities(np.asarray(cs.A, dtype=np.float64), np.asarray(cs.b), slack=slack)


def _cylinder(desc: CylinderDescription) -> CylinderBody:
    z = np.asarray(desc.z_basis, dtype=np.float64).reshape(-1, desc.dim)
    if desc.perp_basis is not None:
        perp = np.asarray(desc.perp_basis, dtype=np.float64).reshape(-1, desc.dim)
    elif np.all(np.isin(z, (0.0, 1.0))) and np.all(z.sum(axis=1) == 1):
        axes = [int(np.argmax(row)) for row in z]
        perp = np.eye(desc.dim)[[i for i in range(desc.dim) if i not in axes]]
    else:
        perp = complement_basis(z, desc.dim)
    k = desc.dim - z.shape[0]
    if k < 1:
        raise IsoresInputError("Cylinder needs dim Z < N", field="z_basis")
    return CylinderBody(z, perp, _cross_section(desc.cross_section, k, desc.slack))


def build_body(desc: BodyDescription) -> ConvexBody | None:
    """Turn a validated description into a body; ``"free"`` yields ``None`` (no obstacle)."""
    match desc:
        case HPolyDescription():
            A = np.asarray(desc.A, dtype=np.float64).reshape(-1, desc.dim)
            return HPolyhedron.from_inequalities(A, np.asarray(desc.b), slack=desc.slack)
        case HalfSpaceDescription():
            if len(desc.normal) != desc.dim:
                raise IsoresInputError("Normal length must equal dim", field="normal")
            return HalfSpace(np.asarray(desc.normal), desc.offset, desc.slack)
        case CylinderDescription():
            return _cylinder(desc)
        case ParaboloidDescription():
            return paraboloid(desc.dim, desc.scale).require_sublinear()
        case BallDescription():
            if len(desc.center) != desc.dim:
                raise IsoresInputError("Center length must equal dim", field="center")
            return ball(desc.center, desc.radius).require_sublinear()
        case OracleGridDescription():
            if len(desc.directions) != len(desc.values):
                raise IsoresInputError("One value per direction is required", field="values")
            rows = [(d, v) for d, v in zip(desc.directions, desc.values, strict=True) if v is not None]
            if not rows:
                raise IsoresInputError("At least one finite support value is required", field="values")
            A = np.asarray([d for d, _ in rows], dtype=np.float64).reshape(-1, desc.dim)
            b = np.asarray([v for _, v in rows], dtype=np.float64) * np.linalg.norm(A, axis=1)
            return oracle_from_polyhedron(HPolyhedron.from_inequalities(A, b, slack=desc.slack))
        case FreeDescription():
            return None
    raise IsoresInputError(f"Unknown body kind {desc!r}")


def describe_body(body: ConvexBody | None, dim: int | None = None) -> BodyDescription | None:
    """Description of a polyhedral body (or of free space), ``None`` for oracle-only bodies."""
    if body is None:
        return FreeDescription(dim=dim) if dim is not None else None
    if isinstance(body, HPolyhedron):
        return HPolyDescription(dim=body.dim, A=body.A.tolist(), b=body.b.tolist(), slack=body.slack)
    if isinstance(body, HalfSpace):
        return HalfSpaceDescription(
            dim=body.dim, normal=body.normal.tolist(), offset=body.offset, slack=body.slack
        )
    if isinstance(body, CylinderBody):
        D = body.cross_section
        return CylinderDescription(
            dim=body.dim,
            z_basis=body.z_basis.tolist(),
            perp_basis=body.perp_basis.tolist(),
            cross_section=InequalitySet(A=D.A.tolist(), b=D.b.tolist()),
            slack=D.slack,
        )
    return None
