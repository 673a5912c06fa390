"""Convex relaxation of the penalized perimeter problem.

All quantities are in grid units: perimeter in ``pitch^(N-1)``, volume in
cells. On free cells ``u`` minimizes

    sum_k W_k |D_k u| + c . u + lam |sum(u) - n|,   0 <= u <= 1,

where ``D_k`` differences free neighbours along stencil direction ``k``,
``c`` collects the window boundary (cells beyond the window hold ``u = 0``)
and ``lam = Lambda0 v^(-1/N) pitch``. Edges into the obstacle carry no
cost. The problem is solved with a diagonally preconditioned primal-dual
scheme whose dual value certifies a lower bound.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field

import numpy as np

from ..config.constants import GAP_CHECK_EVERY
from ..errors.exceptions import SolverError
from ..geometry.bodies import BoolArray, FloatArray
from .domain import FREE, OUTSIDE, Grid
from .perimeter import CroftonStencil, crofton_stencil, pad_classes, pair_slices

logger = logging.getLogger("isores")


@dataclass(frozen=True, eq=False)
class EdgeOperator:
    """Free-to-free difference operator on the padded grid."""

    stencil: CroftonStencil
    free: BoolArray
    slices: list[tuple[tuple[slice, ...], tuple[slice, ...]]]
    edges: list[BoolArray]
    boundary_cost: FloatArray
    step: FloatArray
    n_free: int
    pad: int

    @classmethod
    def build(cls, grid: Grid) -> EdgeOperator:
        stencil = crofton_stencil(grid.dim)
        padded = pad_classes(grid.labels, stencil.reach)
        free = padded == FREE
        outside = padded == OUTSIDE
        boundary_cost = np.zeros(padded.shape)
        degree = np.zeros(padded.shape)
        slices = []
        edges = []
        for w, d in zip(stencil.weights, stencil.offsets, strict=True):
            sa, sb = pair_slices(padded.shape, d)
            e = free[sa] & free[sb]
            degree[sa] += e
            degree[sb] += e
            boundary_cost[sa] += w * (free[sa] & outside[sb])
            boundary_cost[sb] += w * (free[sb] & outside[sa])
            slices.append((sa, sb))
            edges.append(e)
        step = np.where(free, 1.0 / (degree + 1.0), 0.0)
        return cls(stencil, free, slices, edges, boundary_cost, step, int(free.sum()), stencil.reach)

    def crop(self, u: FloatArray) -> FloatArray:
        inner = tuple(slice(self.pad, n - self.pad) for n in u.shape)
        return u[inner]

    def embed(self, u: FloatArray) -> FloatArray:
        return np.pad(u, self.pad, mode="constant", constant_values=0.0)

    def tv(self, u: FloatArray) -> float:
        total = 0.0
        for w, (sa, sb), e in zip(self.stencil.weights, self.slices, self.edges, strict=True):
            total += float(w) * float(np.abs(u[sb] - u[sa])[e].sum())
        return total

    def adjoint(self, duals: list[FloatArray]) -> FloatArray:
        out = np.zeros(self.free.shape)
        for p, (sa, sb) in zip(duals, self.slices, strict=True):
            out[sb] += p
            out[sa] -= p
        return out


@dataclass(frozen=True, eq=False)
class RelaxedField:
    """Relaxed minimizer ``u`` on the (unpadded) grid plus its certificate.

    ``energy`` is the primal value in physical units and ``lower_bound`` the
    matching dual value; ``gap`` is their relative difference.
    """

    u: FloatArray
    energy: float
    lower_bound: float
    gap: float
    iterations: int
    converged: bool
    duals: list[FloatArray] = field(repr=False, default_factory=list)
    volume_dual: float = 0.0


def _primal(op: EdgeOperator, x: FloatArray, linear: FloatArray, n: float, lam: float) -> float:
    return op.tv(x) + float((linear * x).sum()) + lam * abs(float(x.sum()) - n)


def relax(
    grid: Grid,
    n_target: int,
    lam: float,
    max_iterations: int,
    gap_target: float,
    extra_linear: FloatArray | None = None,
    start: FloatArray | None = None,
    warm: RelaxedField | None = None,
    operator: EdgeOperator | None = None,
) -> RelaxedField:
    """Run the primal-dual scheme until the relative duality gap drops below *gap_target*.

    :param lam: Volume penalty per cell in grid units.
    :param extra_linear: Additional linear cost per cell (unpadded), used by the binarization rounds.
    :param start: Initial field (unpadded); defaults to the uniform field with the target volume.
    :param warm: Previous result whose duals seed this run.
    """
    op = operator or EdgeOperator.build(grid)
    if op.n_free == 0:
        raise SolverError("No free cells in the window", partial={"free_cells": 0, "n_target": n_target})
    linear = op.boundary_cost.copy()
    if extra_linear is not None:
        linear += op.embed(extra_linear)
    linear[~op.free] = 0.0

    if start is not None:
        x = np.where(op.free, op.embed(start), 0.0)
    elif warm is not None:
        x = np.where(op.free, op.embed(warm.u), 0.0)
    else:
        x = np.where(op.free, min(1.0, n_target / op.n_free), 0.0)
    x = np.clip(x, 0.0, 1.0)
    if warm is not None and warm.duals:
        duals = [p.copy() for p in warm.duals]
    else:
        duals = [np.zeros(e.shape) for e in op.edges]
    q = warm.volume_dual if warm is not None else 0.0
    sigma_q = 1.0 / op.n_free
    weights = op.stencil.weights
    xbar = x.copy()

    energy = lower = float("nan")
    gap = float("inf")
    converged = False
    it = 0
    for it in range(1, max_iterations + 1):
        for k, ((sa, sb), e) in enumerate(zip(op.slices, op.edges, strict=True)):
            w = float(weights[k])
            duals[k] = np.clip(duals[k] + 0.5 * (xbar[sb] - xbar[sa]) * e, -w, w)
        q = float(np.clip(q + sigma_q * (float(xbar.sum()) - n_target), -lam, lam))
        grad = op.adjoint(duals) + q + linear
        x_new = np.where(op.free, np.clip(x - op.step * grad, 0.0, 1.0), 0.0)
        xbar = 2.0 * x_new - x
        x = x_new

        if it % GAP_CHECK_EVERY == 0 or it == max_iterations:
            grad = op.adjoint(duals) + q + linear
            lower = float(np.minimum(grad[op.free], 0.0).sum()) - q * n_target
            energy = _primal(op, x, linear, n_target, lam)
            gap = (energy - lower) / max(abs(energy), 1e-12)
            logger.debug("relaxation it=%d primal=%.6g dual=%.6g gap=%.3g", it, energy, lower, gap)
            if gap <= gap_target:
                converged = True
                break

    scale = grid.pitch ** (grid.dim - 1)
    return RelaxedField(
        u=op.crop(x).copy(),
        energy=energy * scale,
        lower_bound=lower * scale,
        gap=gap,
        iterations=it,
        converged=converged,
        duals=duals,
        volume_dual=q,
    )


def binarize(
    grid: Grid,
    relaxed: RelaxedField,
    n_target: int,
    lam: float,
    rounds: int,
    max_iterations: int,
    gap_target: float,
    operator: EdgeOperator | None = None,
) -> RelaxedField:
    """Push a relaxed field towards 0/1 by convex-concave rounds.

    Each round adds the linearization of ``gamma * u (1 - u)`` at the
    current field, ``gamma = lam / 2``, and re-solves warm-started.
    """
    op = operator or EdgeOperator.build(grid)
    gamma = 0.5 * lam
    current = relaxed
    for r in range(rounds):
        extra = gamma * (1.0 - 2.0 * current.u)
        current = relax(grid, n_target, lam, max_iterations, gap_target, extra_linear=extra, warm=current, operator=op)
        logger.debug("binarization round %d: energy %.6g", r + 1, current.energy)
    return current


def threshold(grid: Grid, u: FloatArray, n_target: int) -> BoolArray:
    """The *n_target* free cells with the largest ``u`` (ties broken by cell order)."""
    free = grid.free_mask.reshape(-1)
    idx = np.flatnonzero(free)
    values = u.reshape(-1)[idx]
    if n_target < 1 or values.size == 0 or not values.max() > 0:
        raise SolverError(
            "Thresholded set is empty",
            partial={
                "n_target": n_target,
                "free_cells": int(values.size),
                "field_max": float(values.max()) if values.size else None,
            },
        )
    order = np.argsort(-values, kind="stable")[:n_target]
    mask = np.zeros(free.shape[0], dtype=bool)
    mask[idx[order]] = True
    return mask.reshape(grid.labels.shape)