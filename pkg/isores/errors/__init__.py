from .exceptions import (
    ConstructionError,
    DegenerateBodyError,
    DisjointWindowError,
    InfeasibleVolumeError,
    IsoresError,
    IsoresInputError,
    NoDecompositionError,
    NoStableLimitError,
    ResolutionError,
    SolverError,
)

__all__ = [
    "ConstructionError",
    "DegenerateBodyError",
    "DisjointWindowError",
    "InfeasibleVolumeError",
    "IsoresError",
    "IsoresInputError",
    "NoDecompositionError",
    "NoStableLimitError",
    "ResolutionError",
    "SolverError",
]
