from __future__ import annotations

import itertools
import logging
import math
from dataclasses import dataclass

import numpy as np

from ..geometry.bodies import BoolArray, FloatArray
from .domain import FREE, IN_SET, OBSTACLE, Grid, UInt8Array
from .perimeter import CroftonStencil, crofton_stencil, pad_classes, perimeter_split

logger = logging.getLogger("isores")

_MARGIN = 2


@dataclass(frozen=True)
class AnnealOptions:
    sweeps: int
    t0: float
    cooling: float
    seed: int


@dataclass(frozen=True, eq=False)
class AnnealResult:
    mask: BoolArray
    perimeter: float
    penalized: float
    accepted: int
    sweeps: int
    improved: bool


class _Lattice:
    """Class array padded for colored updates; cells sharing ``index mod 3`` never interact."""

    def __init__(self, grid: Grid, mask: BoolArray, stencil: CroftonStencil) -> None:
        self.stencil = stencil
        self.reach = stencil.reach
        self.pad = self.reach + 3 + _MARGIN
        classes = grid.labels.copy()
        classes[mask] = IN_SET
        self.full: UInt8Array = pad_classes(classes, self.pad)
        self.colors = list(itertools.product(range(3), repeat=grid.dim))
        self.shift = np.vstack([stencil.offsets, -stencil.offsets])
        self.shift_weights = np.concatenate([stencil.weights, stencil.weights])

    def window(self) -> tuple[UInt8Array, tuple[int, ...]]:
        """A view of the set's bounding box plus a margin, sides rounded up to multiples of 3."""
        idx = np.nonzero(self.full == IN_SET)
        lo_list = []
        sizes = []
        for axis, n in enumerate(self.full.shape):
            lo = max(int(idx[axis].min()) - _MARGIN, self.reach)
            size = 3 * math.ceil((int(idx[axis].max()) + _MARGIN + 1 - lo) / 3)
            lo = min(lo, n - self.reach - size)
            lo_list.append(lo)
            sizes.append(size)
        r = self.reach
        view = self.full[tuple(slice(lo - r, lo + s + r) for lo, s in zip(lo_list, sizes, strict=True))]
        return view, tuple(sizes)

    def strided(
        self, view: UInt8Array, sizes: tuple[int, ...], color: tuple[int, ...], offset: np.ndarray
    ) -> UInt8Array:
        r = self.reach
        return view[
            tuple(
                slice(r + c + int(d), r + c + int(d) + s - 2, 3)
                for c, d, s in zip(color, offset, sizes, strict=True)
            )
        ]

    def delta_perimeter(self, view: UInt8Array, sizes: tuple[int, ...], color: tuple[int, ...]) -> FloatArray:
        center = self.strided(view, sizes, color, np.zeros(len(color), dtype=np.intp))
        in_set = center == IN_SET
        delta = np.zeros(center.shape)
        for w, d in zip(self.shift_weights, self.shift, strict=True):
            nb = self.strided(view, sizes, color, d)
            differ = (nb == IN_SET) != in_set
            delta += np.where(nb == OBSTACLE, 0.0, w * (1.0 - 2.0 * differ))
        return delta

    def mask(self) -> BoolArray:
        inner = tuple(slice(self.pad, n - self.pad) for n in self.full.shape)
        return np.asarray(self.full[inner] == IN_SET)


def _penalized(perimeter: float, cells: int, n_target: int, lam: float) -> float:
    return perimeter + lam * abs(cells - n_target)


def _volume_step(cells: int, n_target: int, lam: float, adding: np.ndarray) -> np.ndarray:
    """Linearized change of ``lam |V - n|`` for single flips."""
    if cells > n_target:
        return np.where(adding, lam, -lam)
    if cells < n_target:
        return np.where(adding, -lam, lam)
    return np.full(adding.shape, lam)


def repair_volume(lattice: _Lattice, n_target: int) -> int:
    """Greedily add or remove the cheapest cells until the set holds exactly *n_target* cells."""
    cells = int(np.count_nonzero(lattice.full == IN_SET))
    while cells != n_target:
        adding = cells < n_target
        source = FREE if adding else IN_SET
        view, sizes = lattice.window()
        best: tuple[float, tuple[int, ...]] | None = None
        for color in lattice.colors:
            center = lattice.strided(view, sizes, color, np.zeros(len(color), dtype=np.intp))
            candidates = center == source
            if not candidates.any():
                continue
            cost = float(lattice.delta_perimeter(view, sizes, color)[candidates].min())
            if best is None or cost < best[0]:
                best = (cost, color)
        if best is None:
            break
        color = best[1]
        center = lattice.strided(view, sizes, color, np.zeros(len(color), dtype=np.intp))
        delta = lattice.delta_perimeter(view, sizes, color)
        candidates = np.flatnonzero((center == source).reshape(-1))
        order = np.argsort(delta.reshape(-1)[candidates], kind="stable")[: abs(n_target - cells)]
        chosen = np.unravel_index(candidates[order], center.shape)
        center[chosen] = IN_SET if adding else FREE
        cells += len(order) if adding else -len(order)
    return cells


def anneal(
    grid: Grid,
    start: BoolArray,
    n_target: int,
    lam: float,
    options: AnnealOptions,
) -> AnnealResult:
    """Metropolis boundary flips on the penalized energy, then exact volume repair.

    Energies are in grid units (perimeter ``pitch^(N-1)``, volume in cells).
    The best set seen is kept; the start set wins if nothing beats it.
    """
    stencil = crofton_stencil(grid.dim)
    rng = np.random.default_rng(options.seed)
    lattice = _Lattice(grid, start, stencil)
    scale = grid.pitch ** (grid.dim - 1)

    rel, _ = perimeter_split(_classes(grid, start), grid.pitch)
    perimeter = rel / scale
    cells = int(np.count_nonzero(start))
    start_energy = _penalized(perimeter, cells, n_target, lam)
    best_energy = start_energy
    best_mask = lattice.mask()
    accepted = 0

    for sweep in range(options.sweeps):
        temperature = options.t0 * options.cooling**sweep
        view, sizes = lattice.window()
        for color in lattice.colors:
            center = lattice.strided(view, sizes, color, np.zeros(grid.dim, dtype=np.intp))
            movable = (center == FREE) | (center == IN_SET)
            if not movable.any():
                continue
            adding = center == FREE
            d_perimeter = lattice.delta_perimeter(view, sizes, color)
            d_energy = d_perimeter + _volume_step(cells, n_target, lam, adding)
            draw = rng.random(center.shape)
            accept = movable & ((d_energy <= 0) | (draw < np.exp(-np.maximum(d_energy, 0.0) / temperature)))
            if not accept.any():
                continue
            add_now = accept & adding
            drop_now = accept & ~adding
            center[add_now] = IN_SET
            center[drop_now] = FREE
            perimeter += float(d_perimeter[accept].sum())
            cells += int(add_now.sum()) - int(drop_now.sum())
            accepted += int(accept.sum())
            if cells == 0:
                break
        energy = _penalized(perimeter, cells, n_target, lam)
        if cells > 0 and energy < best_energy:
            best_energy = energy
            best_mask = lattice.mask()
        logger.debug("anneal sweep %d T=%.3g energy %.6g (best %.6g)", sweep, temperature, energy, best_energy)
        if cells == 0:
            break

    lattice = _Lattice(grid, best_mask, stencil)
    repair_volume(lattice, n_target)
    mask = lattice.mask()
    rel, _ = perimeter_split(_classes(grid, mask), grid.pitch)
    final_energy = _penalized(rel / scale, int(np.count_nonzero(mask)), n_target, lam)
    improved = final_energy < start_energy
    if not improved:
        mask = start.copy()
        final_energy = start_energy
        rel, _ = perimeter_split(_classes(grid, mask), grid.pitch)
    return AnnealResult(mask, rel, final_energy * scale, accepted, options.sweeps, improved)


def _classes(grid: Grid, mask: BoolArray) -> UInt8Array:
    out = grid.labels.copy()
    out[mask] = IN_SET
    return out
