from __future__ import annotations

import itertools
import logging
import math
from dataclasses import dataclass
from functools import partial

import numpy as np
from scipy.integrate import quad
from scipy.optimize import linprog

from ..config.constants import CUBE_PITCH_DIVISOR
from ..errors.exceptions import ConstructionError, IsoresInputError
from ..geometry.bodies import CylinderBody, FloatArray, HPolyhedron
from ..geometry.polyhedra import chebyshev_ball
from ..runtime.limiter import map_concurrently
from .closed_form import unit_ball_volume

logger = logging.getLogger("isores")

_TILE = 64


@dataclass(frozen=True)
class InscribedCube:
    """Axis-aligned cube ``center + [-alpha, alpha]^k`` inside a cross-section."""

    center: FloatArray
    alpha: float


@dataclass(frozen=True)
class Attachment:
    """Ball ``B_r`` pushed into a cylinder ``Z + D`` through the cube at the top of ``D``.

    ``volume`` is ``|B_r \\ C|`` and ``perimeter_bound`` the area of the part
    of the sphere left outside ``C``, an upper bound on ``I_C(volume)``.
    """

    dim: int
    dstar: int
    radius: float
    alpha: float
    volume: float
    displaced_volume: float
    hidden_area: float
    sphere_area: float
    perimeter_bound: float
    residue: float
    quadrature_error: float
    cells: int
    cap_constant: float


def inscribed_cube(cross_section: HPolyhedron) -> InscribedCube:
    """Largest axis-aligned cube in *cross_section*: ``max alpha`` s.t. ``a.c + alpha |a|_1 <= b``."""
    k = cross_section.dim
    A = cross_section.A
    l1 = np.sum(np.abs(A), axis=1)
    c = np.zeros(k + 1)
    c[-1] = -1.0
    res = linprog(
        c,
        A_ub=np.hstack([A, l1[:, None]]),
        b_ub=cross_section.b,
        bounds=[(None, None)] * k + [(0.0, None)],
        method="highs",
    )
    if res.status != 0 or res.x[-1] <= 1e-12:
        raise ConstructionError("Could not find a cube inside the cross-section; pass alpha explicitly")
    return InscribedCube(np.asarray(res.x[:k], dtype=np.float64), float(res.x[-1]))


def _sphere_measure(k: int) -> float:
    """Area of the unit sphere ``S^(k-1)`` (2 for ``k = 1``)."""
    return k * unit_ball_volume(k) if k >= 2 else 2.0


def _cap_area(r: float, rho2: float, t_lo: float, t_hi: float, k: int) -> float:
    """Area of ``{|z|^2 + rho^2 + (r - t)^2 = r^2, t in [t_lo, t_hi]}`` over ``z in R^k``, upper hemisphere only."""
    t_lo, t_hi = max(t_lo, 0.0), min(t_hi, r)
    if t_hi <= t_lo or rho2 >= r * r:
        return 0.0
    a = math.sqrt(r * r - rho2)

    def phi(t: float) -> float:
        s2 = max(2 * r * t - t * t - rho2, 0.0)
        return math.asin(min(1.0, math.sqrt(s2) / a))

    p_lo, p_hi = phi(t_lo), phi(t_hi)
    if p_hi <= p_lo:
        return 0.0
    if k == 1:
        return 2.0 * r * (p_hi - p_lo)
    if k == 2:
        return 2 * math.pi * r * a * (math.cos(p_lo) - math.cos(p_hi))
    value, _ = quad(lambda p: math.sin(p) ** (k - 1), p_lo, p_hi)
    return _sphere_measure(k) * r * a ** (k - 1) * value


def _ball_overlap(r: float, rho2: float, t_lo: float, t_hi: float, k: int) -> float:
    """``∫ |S^(k-1)| s^(k-1) |[r - w, r + w] ∩ [t_lo, t_hi]| ds`` with ``w = sqrt(r^2 - rho^2 - s^2)``."""
    if t_hi <= t_lo or rho2 >= r * r:
        return 0.0
    a2 = r * r - rho2
    w_min = max(r - t_hi, t_lo - r, 0.0)
    if w_min * w_min >= a2:
        return 0.0
    s_max = math.sqrt(a2 - w_min * w_min)

    def length(s: float) -> float:
        w = math.sqrt(max(a2 - s * s, 0.0))
        return max(0.0, min(r + w, t_hi) - max(r - w, t_lo))

    breaks = sorted(
        math.sqrt(a2 - w * w) for w in (r - t_lo, t_hi - r) if 0 < w and w * w < a2 and math.sqrt(a2 - w * w) < s_max
    )
    value, _ = quad(lambda s: s ** (k - 1) * length(s), 0.0, s_max, points=breaks or None, limit=200)
    return _sphere_measure(k) * value


def _chords(D: HPolyhedron, base: FloatArray, e: FloatArray) -> tuple[FloatArray, FloatArray]:
    """``[t_lo, t_hi]`` with ``base - t e`` in ``D``, one row per base point (empty when ``t_lo > t_hi``)."""
    coef = -(D.A @ e)
    rhs = D.b[None, :] - base @ D.A.T
    with np.errstate(divide="ignore", invalid="ignore"):
        ratio = rhs / coef[None, :]
    upper = np.where(coef[None, :] > 1e-15, ratio, np.inf).min(axis=1)
    lower = np.where(coef[None, :] < -1e-15, ratio, -np.inf).max(axis=1)
    flat_ok = np.all((np.abs(coef)[None, :] > 1e-15) | (rhs >= -D.slack), axis=1)
    upper = np.where(flat_ok, upper, -np.inf)
    return lower, upper


def _tile(
    cells: FloatArray, pitch: float, q0: FloatArray, e: FloatArray, D: HPolyhedron, r: float, k: int
) -> tuple[float, float]:
    """Hidden area and displaced volume of a tile of ``y''`` cells (lower-left corners in *cells*)."""
    m1 = cells.shape[1]
    offsets = np.array(list(itertools.product((0.0, pitch), repeat=m1))) if m1 else np.zeros((1, 0))
    measure = pitch**m1 if m1 else 1.0
    area = 0.0
    volume = 0.0
    for corner in cells:
        pts = corner[None, :] + offsets
        base = q0[None, :] + np.hstack([pts, np.zeros((pts.shape[0], 1))])
        lo, hi = _chords(D, base, e)
        t_lo, t_hi = float(lo.max()), float(hi.min())
        rho2 = np.sum(pts**2, axis=1)
        if t_lo < t_hi:
            inner = _cap_area(r, float(rho2.min()), t_lo, t_hi, k)
            outer = _cap_area(r, float(rho2.max()), t_lo, t_hi, k)
            area += measure * min(inner, outer)
        mid = corner + 0.5 * pitch
        mid_base = q0 + np.append(mid, 0.0)
        m_lo, m_hi = _chords(D, mid_base[None, :], e)
        volume += measure * _ball_overlap(r, float(np.sum(mid**2)), float(m_lo[0]), float(m_hi[0]), k)
    return area, volume


def _integrate(
    D: HPolyhedron, q0: FloatArray, r: float, k: int, pitch: float, workers: int | None
) -> tuple[float, float, int]:
    m = D.dim
    e = np.zeros(m)
    e[-1] = 1.0
    m1 = m - 1
    if m1:
        eye = np.eye(m)
        hi = np.array([D.support(eye[i]) - q0[i] for i in range(m1)])
        lo = np.array([-D.support(-eye[i]) - q0[i] for i in range(m1)])
        axes = [lo[i] + pitch * np.arange(int(math.ceil((hi[i] - lo[i]) / pitch))) for i in range(m1)]
        cells = np.stack(np.meshgrid(*axes, indexing="ij"), axis=-1).reshape(-1, m1)
    else:
        cells = np.zeros((1, 0))

    tiles = [cells[i : i + _TILE] for i in range(0, cells.shape[0], _TILE)]
    parts = map_concurrently([partial(_tile, t, pitch, q0, e, D, r, k) for t in tiles], workers)
    area = math.fsum(p[0] for p in parts)
    volume = math.fsum(p[1] for p in parts)
    return area, volume, int(cells.shape[0])


def ball_attachment(
    cylinder: CylinderBody,
    r: float,
    pitch: float | None = None,
    alpha: float | None = None,
    workers: int | None = None,
) -> Attachment:
    """Attach ``B_r`` to a convex cylinder from the side of ``D`` and measure what it gains.

    The ball's top point sits at the center ``q0`` of a cube
    ``q0 + [-alpha, alpha]^(N-d*)`` inside ``D``. Hidden area is integrated
    over ``y''`` cells of pitch *pitch* (default ``alpha/200``), each cell
    using the chord common to all its corners, so the area is never
    overestimated. The quadrature error is the change against pitch ``2 *
    pitch``.
    """
    k = cylinder.k
    dim = cylinder.dim
    D = cylinder.cross_section
    if k < 1:
        raise ConstructionError("Ball attachment needs an unbounded cylinder (d* >= 1)")

    if alpha is None:
        cube = inscribed_cube(D)
        q0, a = cube.center, cube.alpha
    else:
        q0 = chebyshev_ball(D)[1]
        a = float(alpha)
        if np.any(D.A @ q0 + a * np.sum(np.abs(D.A), axis=1) > D.b + 1e-9):
            raise ConstructionError(f"Cube of half-width {a} does not fit in the cross-section")
    if not 2 * r * a - a * a > 0:
        raise IsoresInputError(f"Radius {r} too small for cube half-width {a}", field="r")
    h = pitch if pitch is not None else a / CUBE_PITCH_DIVISOR
    if h <= 0:
        raise IsoresInputError("Quadrature pitch must be positive", field="pitch")

    hidden, displaced, cells = _integrate(D, q0, r, k, h, workers)
    hidden_c, displaced_c, _ = _integrate(D, q0, r, k, 2 * h, workers)

    omega = unit_ball_volume(dim)
    sphere = dim * omega * r ** (dim - 1)
    volume = omega * r**dim - displaced
    x = displaced / (omega * r**dim)
    residue = sphere * math.expm1((dim - 1) / dim * math.log1p(-x)) + hidden
    residue_c = sphere * math.expm1((dim - 1) / dim * math.log1p(-displaced_c / (omega * r**dim))) + hidden_c
    cap = hidden / (a ** (dim - 1 - k) * (a * r) ** (k / 2))
    logger.debug("Attachment r=%.4g: hidden %.6g, displaced %.6g over %d cells", r, hidden, displaced, cells)
    return Attachment(
        dim=dim,
        dstar=k,
        radius=float(r),
        alpha=a,
        volume=volume,
        displaced_volume=displaced,
        hidden_area=hidden,
        sphere_area=sphere,
        perimeter_bound=sphere - hidden,
        residue=residue,
        quadrature_error=abs(residue - residue_c),
        cells=cells,
        cap_constant=cap,
    )
