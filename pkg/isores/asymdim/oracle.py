from __future__ import annotations

import logging
from collections.abc import Callable, Sequence
from dataclasses import dataclass, field
from functools import partial

import numpy as np

from ..config.constants import (
    DEFAULT_GAMMAS,
    DEFAULT_SCHEDULE,
    EXTENT_THRESHOLD,
    ORACLE_CHAINS,
    ORACLE_STEPS,
    RECESSION_REACH,
    STABLE_RUN,
)
from ..errors.exceptions import IsoresInputError, NoStableLimitError
from ..geometry.bodies import BoolArray, ConvexBody, FloatArray, SupportOracle
from ..geometry.polyhedra import chebyshev_ball, complement_basis
from ..models.enums import Confidence, DstarMethod
from ..models.reports import DstarReport, ScheduleEntry
from ..runtime.limiter import map_concurrently

logger = logging.getLogger("isores")

_BISECTION_STEPS = 40
_BURN_IN = 4
_SEARCH_SEEDS = 8
_PATTERN_ITERATIONS = 200
_MIN_ANGLE_STEP = 1e-9


@dataclass(frozen=True)
class ScalingSchedule:
    """Base points ``x_n = p + n z`` and scales ``lambda_n = n^(-gamma)`` for every gamma."""

    ns: tuple[float, ...] = DEFAULT_SCHEDULE
    gammas: tuple[float, ...] = DEFAULT_GAMMAS
    chains: int = ORACLE_CHAINS
    steps: int = ORACLE_STEPS
    threshold: float = EXTENT_THRESHOLD
    seed: int = 0

    def __post_init__(self) -> None:
        if len(self.ns) < STABLE_RUN:
            raise IsoresInputError(f"A schedule needs at least {STABLE_RUN} values of n", field="schedule")
        if any(b <= a for a, b in zip(self.ns, self.ns[1:], strict=False)) or self.ns[0] <= 0:
            raise IsoresInputError("Schedule values must be positive and increasing", field="schedule")
        if not self.gammas or any(g <= 0 for g in self.gammas):
            raise IsoresInputError("Scaling exponents must be positive", field="gammas")


@dataclass(frozen=True)
class OracleEstimate:
    dstar: int
    method: DstarMethod
    confidence: Confidence
    entries: list[ScheduleEntry] = field(default_factory=list)
    stable_gammas: list[float] = field(default_factory=list)
    recession_direction: FloatArray | None = None

    def to_report(self, dim: int, warnings: list[str] | None = None) -> DstarReport:
        return DstarReport(
            dim=dim,
            dstar=self.dstar,
            method=self.method,
            confidence=self.confidence,
            witness=self.entries,
            stable_gammas=self.stable_gammas,
            warnings=warnings or [],
        )


def _interior_point(body: ConvexBody) -> FloatArray:
    if isinstance(body, SupportOracle):
        return np.asarray(body.interior_point, dtype=np.float64)
    return chebyshev_ball(body.as_polyhedron())[1]


def find_recession_direction(body: ConvexBody, reach: float = RECESSION_REACH, seed: int = 0) -> FloatArray | None:
    """A unit direction ``z`` with ``p + t z`` in the body for ``t`` up to *reach*, or ``None``.

    Tries the body's hint first, then the coordinate directions, then
    random directions.
    """
    p = _interior_point(body)
    dim = body.dim
    candidates: list[FloatArray] = []
    if isinstance(body, SupportOracle) and body.recession_hint is not None:
        candidates.append(np.asarray(body.recession_hint, dtype=np.float64))
    eye = np.eye(dim)
    candidates += [s * e for e in eye for s in (1.0, -1.0)]
    rng = np.random.default_rng(seed)
    random_dirs = rng.normal(size=(16 * dim, dim))
    candidates += list(random_dirs / np.linalg.norm(random_dirs, axis=1, keepdims=True))

    ts = np.geomspace(1.0, reach, 7)
    for z in candidates:
        if np.all(body.contains_points(p + ts[:, None] * z)):
            return z
    return None


def _chord(
    inside: Callable[[FloatArray], BoolArray], y: FloatArray, d: FloatArray, t_max: float = 2.0
) -> FloatArray:
    """Largest ``t`` in ``[0, t_max]`` with ``y + t d`` inside, per row (vectorized bisection)."""
    lo = np.zeros(y.shape[0])
    hi = np.full(y.shape[0], t_max)
    full = inside(y + t_max * d)
    for _ in range(_BISECTION_STEPS):
        mid = 0.5 * (lo + hi)
        ok = inside(y + mid[:, None] * d)
        lo = np.where(ok, mid, lo)
        hi = np.where(ok, hi, mid)
    return np.where(full, t_max, lo)


def _chord_lengths(inside: Callable[[FloatArray], BoolArray], centre: FloatArray, dirs: FloatArray) -> FloatArray:
    base = np.repeat(centre[None, :], dirs.shape[0], axis=0)
    return np.asarray(_chord(inside, base, dirs) + _chord(inside, base, -dirs), dtype=np.float64)


def _longest_chord(
    inside: Callable[[FloatArray], BoolArray],
    centre: FloatArray,
    basis: FloatArray,
    seeds: FloatArray,
    rng: np.random.Generator,
) -> tuple[float, FloatArray]:
    """Longest chord through *centre* with direction in the row span of *basis*.

    The best seed is refined by a pattern search on the unit sphere of the
    span; steps halve down to ``_MIN_ANGLE_STEP``, which resolves tubes far
    thinner than the extent threshold.
    """
    k = basis.shape[0]
    if k == 1:
        return float(_chord_lengths(inside, centre, basis)[0]), basis[0]
    coeffs = np.vstack([seeds @ basis.T, np.eye(k), rng.normal(size=(_SEARCH_SEEDS, k))])
    norms = np.linalg.norm(coeffs, axis=1)
    coeffs = coeffs[norms > 1e-12] / norms[norms > 1e-12, None]
    lengths = _chord_lengths(inside, centre, coeffs @ basis)
    best = int(np.argmax(lengths))
    c, value = coeffs[best], float(lengths[best])

    step = 0.5
    for _ in range(_PATTERN_ITERATIONS):
        if step < _MIN_ANGLE_STEP:
            break
        tangent = complement_basis(c[None, :], k)
        trial = np.vstack([c + step * tangent, c - step * tangent])
        trial /= np.linalg.norm(trial, axis=1, keepdims=True)
        values = _chord_lengths(inside, centre, trial @ basis)
        j = int(np.argmax(values))
        if values[j] > value * (1.0 + 1e-9):
            c, value = trial[j], float(values[j])
        else:
            step *= 0.5
    return value, c @ basis


def _limit_extents(
    body: ConvexBody,
    base: FloatArray,
    scale: float,
    chains: int,
    steps: int,
    rng: np.random.Generator,
    hints: FloatArray | None = None,
) -> FloatArray:
    """Extents of ``scale (C - base) ∩ B_1``, largest first.

    A hit-and-run population locates a central point. Each extent is then
    the longest chord through it orthogonal to the earlier ones.
    """
    dim = body.dim

    def inside(y: FloatArray) -> BoolArray:
        in_ball = np.sum(y**2, axis=1) <= 1.0
        return in_ball & body.contains_points(base + y / scale)

    y = np.zeros((chains, dim))
    samples: list[FloatArray] = []
    for step in range(steps):
        d = rng.normal(size=(chains, dim))
        d /= np.linalg.norm(d, axis=1, keepdims=True)
        forward = _chord(inside, y, d)
        backward = _chord(inside, y, -d)
        t = rng.uniform(-backward, forward)
        y = y + t[:, None] * d
        if step >= _BURN_IN:
            samples.append(y.copy())

    points = np.vstack(samples)
    centre = points.mean(axis=0)
    cov = np.cov(points, rowvar=False).reshape(dim, dim)
    _, vectors = np.linalg.eigh(cov)
    seeds = vectors.T[::-1]
    if hints is not None:
        seeds = np.vstack([np.asarray(hints, dtype=np.float64).reshape(-1, dim), seeds])

    extents: list[float] = []
    found: list[FloatArray] = []
    for _ in range(dim):
        basis = complement_basis(np.array(found), dim) if found else np.eye(dim)
        length, direction = _longest_chord(inside, centre, basis, seeds, rng)
        extents.append(length)
        found.append(direction)
    return np.sort(np.asarray(extents, dtype=np.float64))[::-1]


def _schedule_entry(
    body: ConvexBody, p: FloatArray, z: FloatArray, gamma: float, n: float, schedule: ScalingSchedule, index: int
) -> ScheduleEntry:
    rng = np.random.default_rng([schedule.seed, index])
    scale = float(n ** (-gamma))
    extents = _limit_extents(body, p + n * z, scale, schedule.chains, schedule.steps, rng, hints=z[None, :])
    estimate = int(np.sum(extents > schedule.threshold))
    return ScheduleEntry(gamma=gamma, n=n, scale=scale, estimate=estimate, extents=[float(e) for e in extents])


def dstar_oracle(
    body: ConvexBody,
    schedule: ScalingSchedule | None = None,
    direction: Sequence[float] | None = None,
    workers: int | None = None,
) -> OracleEstimate:
    """Estimate ``d*`` from rescaled copies ``lambda_n (C - x_n)``.

    Each schedule (one per gamma) is stable when its last estimates agree;
    the result is the maximum over stable schedules. Bodies without a
    recession direction are reported as bounded with ``d* = 0``. The value
    is a lower bound: ``d*`` is a supremum over all sequences and only the
    sampled ones are tried.
    """
    sched = schedule or ScalingSchedule()
    if direction is not None:
        z = np.asarray(direction, dtype=np.float64)
        if abs(float(np.linalg.norm(z)) - 1.0) > 1e-9:
            raise IsoresInputError("Recession direction must have unit norm", field="direction")
    else:
        found = find_recession_direction(body, seed=sched.seed)
        if found is None:
            logger.info("No recession direction found; body treated as bounded")
            return OracleEstimate(0, DstarMethod.BOUNDED, Confidence.STABLE)
        z = found
    p = _interior_point(body)

    jobs = [(g, n) for g in sched.gammas for n in sched.ns]
    tasks = [partial(_schedule_entry, body, p, z, g, n, sched, i) for i, (g, n) in enumerate(jobs)]
    entries: list[ScheduleEntry] = map_concurrently(tasks, workers)

    estimates: dict[str, list[int]] = {}
    stable: list[float] = []
    best = -1
    for g in sched.gammas:
        series = [e.estimate for e in entries if e.gamma == g]
        estimates[f"gamma={g:g}"] = series
        tail = series[-STABLE_RUN:]
        if len(set(tail)) == 1:
            stable.append(g)
            best = max(best, tail[0])
        logger.debug("Schedule gamma=%g estimates %s", g, series)

    if best < 0:
        raise NoStableLimitError("Rescaled bodies did not settle on a dimension", estimates)
    confidence = Confidence.STABLE if len(stable) == len(sched.gammas) else Confidence.PARTIAL
    return OracleEstimate(best, DstarMethod.ORACLE, confidence, entries, stable, z)
