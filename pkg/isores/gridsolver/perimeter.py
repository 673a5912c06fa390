"""Cauchy–Crofton perimeter estimates on voxel sets.

A set's boundary is measured by counting transitions along lattice lines
in a handful of directions. Each direction ``d_k`` carries a weight so that
the estimate is exact on average over orientations:

* 2D: ``0.5 * dtheta_k / |d_k|`` with ``dtheta_k`` the arc of the half
  circle closest to ``d_k`` (the arcs sum to ``pi``).
* 3D: ``w_k / (pi |d_k|)`` with ``w_k`` the spherical Voronoi area of
  ``d_k`` among the 26 neighbour directions (one side sums to ``2 pi``).

Weights are per transition in units of ``pitch^(N-1)``.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
import numpy.typing as npt
from scipy.spatial import SphericalVoronoi

from ..config.constants import CROFTON_DIRECTIONS_2D
from ..errors.exceptions import IsoresInputError
from ..geometry.bodies import FloatArray
from .domain import FREE, IN_SET, OBSTACLE, OUTSIDE, DiscreteSet, UInt8Array

IntArray = npt.NDArray[np.intp]


@dataclass(frozen=True, eq=False)
class CroftonStencil:
    dim: int
    offsets: IntArray
    weights: FloatArray

    @property
    def reach(self) -> int:
        return int(np.abs(self.offsets).max())

    def __len__(self) -> int:
        return int(self.offsets.shape[0])


def _planar_weights(offsets: IntArray) -> FloatArray:
    theta = np.mod(np.arctan2(offsets[:, 1], offsets[:, 0]), math.pi)
    order = np.argsort(theta)
    sorted_theta = theta[order]
    nxt = np.roll(sorted_theta, -1)
    nxt[-1] += math.pi
    prev = np.roll(sorted_theta, 1)
    prev[0] -= math.pi
    arcs = np.empty_like(theta)
    arcs[order] = 0.5 * (nxt - prev)
    return np.asarray(0.5 * arcs / np.linalg.norm(offsets, axis=1), dtype=np.float64)


def _spatial_offsets() -> IntArray:
    out = []
    for d in itertools.product((-1, 0, 1), repeat=3):
        nz = [c for c in d if c != 0]
        if nz and nz[0] > 0:
            out.append(d)
    return np.array(out, dtype=np.intp)


def _spatial_weights(offsets: IntArray) -> FloatArray:
    both = np.vstack([offsets, -offsets]).astype(np.float64)
    units = both / np.linalg.norm(both, axis=1, keepdims=True)
    areas = SphericalVoronoi(units, radius=1.0, center=np.zeros(3)).calculate_areas()
    k = offsets.shape[0]
    w = 0.5 * (areas[:k] + areas[k:])
    return np.asarray(w / (math.pi * np.linalg.norm(offsets, axis=1)), dtype=np.float64)


@lru_cache(maxsize=4)
def crofton_stencil(dim: int) -> CroftonStencil:
    if dim == 2:
        offsets = np.array(CROFTON_DIRECTIONS_2D, dtype=np.intp)
        weights = _planar_weights(offsets)
    elif dim == 3:
        offsets = _spatial_offsets()
        weights = _spatial_weights(offsets)
    else:
        raise IsoresInputError(f"No perimeter stencil for N = {dim}", field="dim")
    offsets.setflags(write=False)
    weights.setflags(write=False)
    return CroftonStencil(dim, offsets, weights)


def pad_classes(classes: UInt8Array, width: int) -> UInt8Array:
    return np.pad(classes, width, mode="constant", constant_values=OUTSIDE)


def pair_slices(shape: tuple[int, ...], offset: npt.ArrayLike) -> tuple[tuple[slice, ...], tuple[slice, ...]]:
    """Slices ``(a, b)`` with ``array[b]`` the neighbour of ``array[a]`` at *offset*."""
    d = np.asarray(offset, dtype=np.intp)
    sa = tuple(slice(max(0, -int(di)), n - max(0, int(di))) for di, n in zip(d, shape, strict=True))
    sb = tuple(slice(max(0, int(di)), n - max(0, -int(di))) for di, n in zip(d, shape, strict=True))
    return sa, sb


def transition_counts(padded: UInt8Array, stencil: CroftonStencil, others: tuple[int, ...]) -> FloatArray:
    """Per-direction count of ``IN_SET`` cells next to a cell whose class is in *others*."""
    counts = np.zeros(len(stencil))
    other_values = np.array(others, dtype=np.uint8)
    for k, d in enumerate(stencil.offsets):
        sa, sb = pair_slices(padded.shape, d)
        a, b = padded[sa], padded[sb]
        counts[k] = np.count_nonzero((a == IN_SET) & np.isin(b, other_values)) + np.count_nonzero(
            (b == IN_SET) & np.isin(a, other_values)
        )
    return counts


def perimeter_split(classes: UInt8Array, pitch: float) -> tuple[float, float]:
    """``(P(E; outside C), P(E; boundary of C))`` for a class array with the set marked ``IN_SET``."""
    stencil = crofton_stencil(classes.ndim)
    padded = pad_classes(classes, stencil.reach)
    scale = pitch ** (classes.ndim - 1)
    rel = float(stencil.weights @ transition_counts(padded, stencil, (int(FREE), int(OUTSIDE))))
    obs = float(stencil.weights @ transition_counts(padded, stencil, (int(OBSTACLE),)))
    return rel * scale, obs * scale


def relative_perimeter(dset: DiscreteSet) -> float:
    """Perimeter of the set away from the obstacle (window boundary included)."""
    return perimeter_split(dset.classes(), dset.grid.pitch)[0]


def obstacle_perimeter(dset: DiscreteSet) -> float:
    return perimeter_split(dset.classes(), dset.grid.pitch)[1]


def full_perimeter(dset: DiscreteSet) -> float:
    rel, obs = perimeter_split(dset.classes(), dset.grid.pitch)
    return rel + obs
