from .bodies import (
    ConvexBody,
    CylinderBody,
    HalfSpace,
    HPolyhedron,
    PolyhedralBody,
    SupportOracle,
    ball,
    is_polyhedral,
    oracle_from_polyhedron,
    paraboloid,
)
from .operations import (
    anchor_point,
    contains,
    contains_points,
    lattice_points,
    local_hausdorff,
    project,
    rigid_motion,
    support,
    translate_scale,
)
from .polyhedra import (
    GeneratorRep,
    chebyshev_ball,
    from_generators,
    is_bounded,
    recession_cone,
    to_generators,
    verify_generators,
)

__all__ = [
    "ConvexBody",
    "CylinderBody",
    "GeneratorRep",
    "HPolyhedron",
    "HalfSpace",
    "PolyhedralBody",
    "SupportOracle",
    "anchor_point",
    "ball",
    "chebyshev_ball",
    "contains",
    "contains_points",
    "from_generators",
    "is_bounded",
    "is_polyhedral",
    "lattice_points",
    "local_hausdorff",
    "oracle_from_polyhedron",
    "paraboloid",
    "project",
    "recession_cone",
    "rigid_motion",
    "support",
    "to_generators",
    "translate_scale",
    "verify_generators",
]
