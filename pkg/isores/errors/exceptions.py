from __future__ import annotations

from typing import Any


class IsoresError(Exception):
    """Base exception for all isores errors."""

    def __init__(self, message: str, cause: BaseException | None = None) -> None:
        super().__init__(message)
        self.__cause__ = cause


class IsoresInputError(IsoresError):
    """Invalid caller input (dimension mismatch, non-unit direction, bad JSON, ...).

    :param field: Name of the offending parameter, when known.
    """

    def __init__(self, message: str, field: str | None = None, cause: BaseException | None = None) -> None:
        super().__init__(message, cause)
        self.field = field


class DegenerateBodyError(IsoresError):
    """The body is empty, has empty interior, is all of R^N, or cannot be converted."""


class DisjointWindowError(IsoresError):
    """A body does not meet the sample window ``B_R``."""


class NoDecompositionError(IsoresError):
    """The body has ``d* in {0, N}`` so no nontrivial cylinder ``Z + D`` exists.

    :param dstar: The asymptotic dimension that was found.
    """

    def __init__(self, message: str, dstar: int) -> None:
        super().__init__(message)
        self.dstar = dstar


class NoStableLimitError(IsoresError):
    """Rescaled bodies did not settle on a dimension along any scaling schedule.

    :param estimates: Per-schedule dimension estimates, ordered by ``n``.
    """

    def __init__(self, message: str, estimates: dict[str, list[int]] | None = None) -> None:
        super().__init__(message)
        self.estimates = estimates or {}


class InfeasibleVolumeError(IsoresError):
    """The free part of the window cannot hold the requested volume."""

    def __init__(self, message: str, free_volume: float, volume: float) -> None:
        super().__init__(message)
        self.free_volume = free_volume
        self.volume = volume


class ResolutionError(IsoresError):
    """The requested grid exceeds the per-axis cell limit."""

    def __init__(self, message: str, cells: int) -> None:
        super().__init__(message)
        self.cells = cells


class ConstructionError(IsoresError):
    """An analytic construction (inscribed cube, half-ball, tangent ball) failed."""


class SolverError(IsoresError):
    """The grid solver could not produce a usable set.

    :param partial: Diagnostics gathered before the failure (target cells, field
        maximum, relaxed bound, skipped candidates), keyed by name.
    """

    def __init__(self, message: str, partial: dict[str, Any] | None = None) -> None:
        super().__init__(message)
        self.partial = partial
