from .annealing import AnnealOptions, AnnealResult, anneal
from .candidates import candidate_halfball, candidate_tangent_ball
from .diagnostics import (
    Asymmetry,
    Diagnostics,
    asymmetry_deficit,
    count_components,
    diagnostics,
    envelopment,
    hausdorff_to_ball,
    lambda_violations,
    set_diameter,
)
from .domain import FREE, IN_SET, OBSTACLE, OUTSIDE, DiscreteSet, Grid, build_domain, decode_classes, encode_set
from .perimeter import (
    CroftonStencil,
    crofton_stencil,
    full_perimeter,
    obstacle_perimeter,
    perimeter_split,
    relative_perimeter,
)
from .relaxation import EdgeOperator, RelaxedField, binarize, relax, threshold
from .solver import best_candidate, solve, solve_volume

__all__ = [
    "FREE",
    "IN_SET",
    "OBSTACLE",
    "OUTSIDE",
    "AnnealOptions",
    "AnnealResult",
    "Asymmetry",
    "CroftonStencil",
    "Diagnostics",
    "DiscreteSet",
    "EdgeOperator",
    "Grid",
    "RelaxedField",
    "anneal",
    "asymmetry_deficit",
    "best_candidate",
    "binarize",
    "build_domain",
    "candidate_halfball",
    "candidate_tangent_ball",
    "count_components",
    "crofton_stencil",
    "decode_classes",
    "diagnostics",
    "encode_set",
    "envelopment",
    "full_perimeter",
    "hausdorff_to_ball",
    "lambda_violations",
    "obstacle_perimeter",
    "perimeter_split",
    "relative_perimeter",
    "relax",
    "set_diameter",
    "solve",
    "solve_volume",
    "threshold",
]
