from __future__ import annotations

from typing import Annotated, Literal

from pydantic import BaseModel, Field, model_validator


class _BodyBase(BaseModel):
    model_config = {"extra": "forbid"}

    dim: int = Field(ge=2, le=8)
    slack: float = Field(1e-9, ge=0)


class InequalitySet(BaseModel):
    """Rows ``A x <= b`` or a vertex list (bounded sets only)."""

    model_config = {"extra": "forbid"}

    A: list[list[float]] | None = None
    b: list[float] | None = None
    vertices: list[list[float]] | None = None

    @model_validator(mode="after")
    def _one_form(self) -> InequalitySet:
        has_rows = self.A is not None and self.b is not None
        if has_rows == (self.vertices is not None):
            raise ValueError("Give either A and b, or vertices")
        return self


class HPolyDescription(_BodyBase):
    kind: Literal["hpoly"] = "hpoly"
    A: list[list[float]]
    b: list[float]


class HalfSpaceDescription(_BodyBase):
    kind: Literal["halfspace"] = "halfspace"
    normal: list[float]
    offset: float = 0.0


class CylinderDescription(_BodyBase):
    """``Z + D``; when ``perp_basis`` is omitted, ``D`` uses the orthogonal complement of ``z_basis``
    (the remaining coordinate axes in order when ``z_basis`` is axis-aligned)."""

    kind: Literal["cylinder"] = "cylinder"
    z_basis: list[list[float]]
    perp_basis: list[list[float]] | None = None
    cross_section: InequalitySet


class ParaboloidDescription(_BodyBase):
    kind: Literal["paraboloid"] = "paraboloid"
    scale: float = Field(1.0, gt=0)


class BallDescription(_BodyBase):
    kind: Literal["ball"] = "ball"
    center: list[float]
    radius: float = Field(gt=0)


class OracleGridDescription(_BodyBase):
    """Support values sampled on listed directions; ``null`` marks ``+inf``."""

    kind: Literal["oracle-grid"] = "oracle-grid"
    directions: list[list[float]]
    values: list[float | None]


class FreeDescription(_BodyBase):
    """No obstacle: the solver runs in all of ``R^N``."""

    kind: Literal["free"] = "free"


BodyDescription = Annotated[
    HPolyDescription
    | HalfSpaceDescription
    | CylinderDescription
    | ParaboloidDescription
    | BallDescription
    | OracleGridDescription
    | FreeDescription,
    Field(discriminator="kind"),
]


class BodyFile(BaseModel):
    """Wrapper used to validate a body JSON document."""

    body: BodyDescription
