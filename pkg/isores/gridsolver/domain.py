from __future__ import annotations

import logging
import math
from dataclasses import dataclass

import numpy as np
import numpy.typing as npt

from ..config.constants import MAX_CELLS_PER_AXIS, SOLVER_DIMENSIONS
from ..errors.exceptions import InfeasibleVolumeError, IsoresInputError, ResolutionError
from ..geometry.bodies import BoolArray, ConvexBody, FloatArray
from ..geometry.operations import anchor_point
from ..models.reports import MaskEncoding, SolverConstants

logger = logging.getLogger("isores")

FREE = np.uint8(0)
IN_SET = np.uint8(1)
OBSTACLE = np.uint8(2)
OUTSIDE = np.uint8(3)

UInt8Array = npt.NDArray[np.uint8]


@dataclass(frozen=True, eq=False)
class Grid:
    """Voxelized window ``B_{R v^(1/N)}(anchor)`` around a boundary point of the obstacle.

    ``labels`` holds one class per cell: :data:`FREE` (window minus
    obstacle), :data:`OBSTACLE` and :data:`OUTSIDE` (beyond the window).
    Cell ``i`` has center ``origin + i * pitch``.
    """

    dim: int
    pitch: float
    center: FloatArray
    window_multiple: float
    window_radius: float
    origin: FloatArray
    labels: UInt8Array
    body: ConvexBody | None

    @property
    def shape(self) -> tuple[int, ...]:
        return tuple(int(s) for s in self.labels.shape)

    @property
    def cell_volume(self) -> float:
        return self.pitch**self.dim

    @property
    def free_mask(self) -> BoolArray:
        return self.labels == FREE

    @property
    def obstacle_mask(self) -> BoolArray:
        return self.labels == OBSTACLE

    @property
    def window_mask(self) -> BoolArray:
        return self.labels != OUTSIDE

    @property
    def free_volume(self) -> float:
        return float(np.count_nonzero(self.labels == FREE)) * self.cell_volume

    def centers(self, index: tuple[npt.NDArray[np.intp], ...] | npt.NDArray[np.intp]) -> FloatArray:
        """Cell centers for an index tuple (as from ``np.nonzero``) or an ``(M, N)`` index array."""
        idx = np.stack(index, axis=-1) if isinstance(index, tuple) else np.asarray(index)
        return np.asarray(self.origin + idx * self.pitch, dtype=np.float64)

    def target_cells(self, v: float) -> int:
        return int(round(v / self.cell_volume))


@dataclass(frozen=True, eq=False)
class DiscreteSet:
    """A set of free cells of a :class:`Grid`."""

    grid: Grid
    mask: BoolArray

    def __post_init__(self) -> None:
        if self.mask.shape != self.grid.labels.shape:
            raise IsoresInputError("Set mask does not match the grid shape", field="mask")
        if np.any(self.mask & (self.grid.labels != FREE)):
            raise IsoresInputError("Set contains obstacle or out-of-window cells", field="mask")

    @property
    def cells(self) -> int:
        return int(np.count_nonzero(self.mask))

    @property
    def volume(self) -> float:
        return self.cells * self.grid.cell_volume

    def classes(self) -> UInt8Array:
        """Grid labels with the set's cells marked :data:`IN_SET`."""
        out = self.grid.labels.copy()
        out[self.mask] = IN_SET
        return out


def build_domain(
    body: ConvexBody | None,
    v: float,
    dim: int | None = None,
    window: float | None = None,
    pitch: float | None = None,
    cells_per_length: int = 48,
    constants: SolverConstants | None = None,
) -> Grid:
    """Voxelize ``B_{R v^(1/N)} \\ C`` around the anchor point of *body*.

    :param body: The obstacle, or ``None`` for free space (then *dim* is required).
    :param window: Window multiple ``R >= R0``; defaults to ``R0``.
    :param pitch: Cell size; defaults to ``v^(1/N) / cells_per_length``.
    :raises InfeasibleVolumeError: The free part of the window holds at most *v*.
    :raises ResolutionError: More than the per-axis cell limit would be needed.
    """
    n_dim = body.dim if body is not None else dim
    if n_dim is None:
        raise IsoresInputError("dim is required for a free-space grid", field="dim")
    if n_dim not in SOLVER_DIMENSIONS:
        raise IsoresInputError(f"Grid solver supports N in {SOLVER_DIMENSIONS}, got {n_dim}", field="dim")
    if not v > 0:
        raise IsoresInputError("Volume must be positive", field="v")
    consts = constants or SolverConstants.for_dim(n_dim)
    R = window if window is not None else consts.R0
    if R < consts.R0 - 1e-12:
        raise IsoresInputError(f"Window multiple {R} below R0 = {consts.R0:.6f}", field="window")

    scale = v ** (1 / n_dim)
    h = pitch if pitch is not None else scale / cells_per_length
    radius = R * scale
    half = int(math.ceil(radius / h)) + 1
    n = 2 * half + 1
    if n > MAX_CELLS_PER_AXIS:
        raise ResolutionError(f"Window needs {n} cells per axis (limit {MAX_CELLS_PER_AXIS})", cells=n)

    center = anchor_point(body, n_dim)
    origin = center - half * h
    axis = (np.arange(n) - half) * h
    labels = np.empty((n,) * n_dim, dtype=np.uint8)
    rest = np.stack(np.meshgrid(*([axis] * (n_dim - 1)), indexing="ij"), axis=-1).reshape(-1, n_dim - 1)
    rest_sq = np.sum(rest**2, axis=1)
    for i, x0 in enumerate(axis):
        in_window = rest_sq + x0 * x0 <= radius * radius
        slab = np.full(rest.shape[0], OUTSIDE, dtype=np.uint8)
        if body is not None and in_window.any():
            pts = center + np.hstack([np.full((rest.shape[0], 1), x0), rest])
            inside = np.zeros(rest.shape[0], dtype=bool)
            inside[in_window] = body.contains_points(pts[in_window])
            slab[in_window & inside] = OBSTACLE
            slab[in_window & ~inside] = FREE
        else:
            slab[in_window] = FREE
        labels[i] = slab.reshape((n,) * (n_dim - 1))
    labels.setflags(write=False)

    grid = Grid(n_dim, h, center, R, radius, origin, labels, body)
    free = grid.free_volume
    logger.debug("Grid %s, pitch %.4g, free volume %.6g (target %.6g)", grid.shape, h, free, v)
    if free <= v:
        raise InfeasibleVolumeError(f"Free window volume {free:.6g} cannot hold v = {v:.6g}", free, v)
    return grid


def _runs(mask: BoolArray) -> list[int]:
    flat = mask.reshape(-1).astype(np.int8)
    if flat.size == 0:
        return []
    change = np.flatnonzero(np.diff(flat)) + 1
    bounds = np.concatenate([[0], change, [flat.size]])
    lengths = np.diff(bounds).tolist()
    return [0, *lengths] if flat[0] else lengths


def _unrun(runs: list[int], size: int) -> BoolArray:
    values = np.zeros(len(runs), dtype=bool)
    values[1::2] = True
    out = np.repeat(values, runs)
    if out.size != size:
        raise IsoresInputError("Run lengths do not match the grid size", field="runs")
    return out


def encode_set(dset: DiscreteSet) -> MaskEncoding:
    grid = dset.grid
    return MaskEncoding(
        shape=list(grid.shape),
        pitch=grid.pitch,
        origin=[float(x) for x in grid.origin],
        set_runs=_runs(dset.mask),
        obstacle_runs=_runs(grid.labels == OBSTACLE),
        window_runs=_runs(grid.labels != OUTSIDE),
    )


def decode_classes(encoding: MaskEncoding) -> UInt8Array:
    """Cell classes (:data:`FREE`, :data:`IN_SET`, :data:`OBSTACLE`, :data:`OUTSIDE`) from an encoding."""
    shape = tuple(encoding.shape)
    size = int(np.prod(shape))
    out = np.full(size, OUTSIDE, dtype=np.uint8)
    out[_unrun(encoding.window_runs, size)] = FREE
    out[_unrun(encoding.obstacle_runs, size)] = OBSTACLE
    out[_unrun(encoding.set_runs, size)] = IN_SET
    return out.reshape(shape)
