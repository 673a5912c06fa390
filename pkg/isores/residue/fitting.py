from __future__ import annotations

import logging
import math
from collections.abc import Sequence

import numpy as np
from scipy.stats import linregress

from ..config.constants import MIN_FIT_DECADES, MIN_FIT_POINTS, SLOPE_SLACK
from ..errors.exceptions import IsoresInputError
from ..models.enums import Verdict
from ..models.reports import LadderStatistics, PowerLawFit, ProfileRow, ProfileTable, ScalingFit

logger = logging.getLogger("isores")

_TREND_SLACK = 0.1
_HAUSDORFF_SLACK = 0.05


def fit_power_law(x: Sequence[float], y: Sequence[float]) -> PowerLawFit:
    """Least squares of ``log y`` on ``log x``; both must be positive."""
    xs = np.asarray(x, dtype=np.float64)
    ys = np.asarray(y, dtype=np.float64)
    if xs.shape != ys.shape or xs.size < 2:
        raise IsoresInputError("A power-law fit needs at least two (x, y) pairs", field="x")
    if np.any(xs <= 0) or np.any(ys <= 0):
        raise IsoresInputError("Power-law fits need positive data", field="y")
    if np.ptp(np.log(xs)) == 0:
        raise IsoresInputError("Power-law fits need distinct x values", field="x")
    res = linregress(np.log(xs), np.log(ys))
    return PowerLawFit(
        exponent=float(res.slope),
        prefactor=float(math.exp(res.intercept)),
        r2=float(res.rvalue**2),
        n_points=int(xs.size),
    )


def _fit_rows(table: ProfileTable) -> list[ProfileRow]:
    return [
        row
        for row in table.rows
        if row.usable and row.residue is not None and row.residue > 0 and not row.negative_residue
    ]


def scaling_window(dstar: int, dim: int) -> tuple[float, float]:
    """Admissible residue exponents ``[d*/2N - slack, d*/N + slack]``."""
    return dstar / (2 * dim) - SLOPE_SLACK, dstar / dim + SLOPE_SLACK


def fit_scaling(table: ProfileTable, dstar: int | None = None) -> ScalingFit:
    """Fit ``log R(v)`` against ``log v`` over positive-residue rows and compare with the admissible window.

    Fewer than the minimum number of points, or a ladder spanning too few
    decades, gives an inconclusive verdict (with the slope still reported
    when two points exist).
    """
    d = dstar if dstar is not None else table.dstar
    if d is None:
        raise IsoresInputError("Scaling fits need d*; pass it or store it in the table", field="dstar")
    dim = table.dim
    low, high = scaling_window(d, dim)
    rows = _fit_rows(table)
    vs = np.array([row.v for row in rows], dtype=np.float64)
    rs = np.array([row.residue for row in rows], dtype=np.float64)
    decades = float(np.log10(vs.max() / vs.min())) if vs.size else 0.0
    log_v = np.log(vs).tolist()
    log_r = np.log(rs).tolist()

    slope = intercept = r2 = None
    if vs.size >= 2 and decades > 0:
        res = linregress(np.log(vs), np.log(rs))
        slope, intercept, r2 = float(res.slope), float(res.intercept), float(res.rvalue**2)

    message = None
    if vs.size < MIN_FIT_POINTS or decades < MIN_FIT_DECADES:
        verdict = Verdict.INCONCLUSIVE
        message = (
            f"{vs.size} usable rows over {decades:.2f} decades; "
            f"need {MIN_FIT_POINTS} rows over {MIN_FIT_DECADES:g} decades"
        )
        logger.info("Scaling fit inconclusive: %s", message)
    elif slope is not None and low <= slope <= high:
        verdict = Verdict.CONSISTENT
    else:
        verdict = Verdict.INCONSISTENT
        message = f"slope {slope:.4f} outside [{low:.4f}, {high:.4f}]"
        logger.warning("Scaling fit inconsistent: %s", message)
    return ScalingFit(
        dim=dim,
        dstar=d,
        slope=slope,
        intercept=intercept,
        r2=r2,
        n_points=int(vs.size),
        decades=decades,
        window_low=low,
        window_high=high,
        verdict=verdict,
        log_v=log_v,
        log_residue=log_r,
        message=message,
    )


def _maybe_fit(pairs: list[tuple[float, float]]) -> PowerLawFit | None:
    pairs = [(x, y) for x, y in pairs if x > 0 and y > 0]
    if len(pairs) < 2:
        return None
    return fit_power_law([p[0] for p in pairs], [p[1] for p in pairs])


def ladder_statistics(table: ProfileTable, dstar: int | None = None) -> LadderStatistics:
    """Trends of the minimizer diagnostics along a ladder.

    Deficit decay is compared with ``-(N - 1 - d*)/N``; ``v0`` is the
    smallest volume from which every row is connected and
    ``diameter_constant`` the largest ``diameter / v^(1/N)`` seen.
    """
    d = dstar if dstar is not None else table.dstar
    if d is None:
        raise IsoresInputError("Ladder statistics need d*", field="dstar")
    dim = table.dim
    rows = [row for row in table.rows if row.usable]

    deficit_fit = _maybe_fit([(r.v, r.deficit) for r in rows if r.deficit is not None])
    deficit_ok = None
    if deficit_fit is not None:
        deficit_ok = deficit_fit.exponent <= -(dim - 1 - d) / dim + _TREND_SLACK
    obstacle_fit = _maybe_fit([(r.v, r.perimeter_obstacle) for r in rows if r.perimeter_obstacle is not None])
    hd_pairs = [(r.v, r.hd_norm) for r in rows if r.hd_norm is not None]
    hausdorff_fit = _maybe_fit(hd_pairs)
    nonincreasing = None
    if len(hd_pairs) >= 2:
        values = [p[1] for p in hd_pairs]
        nonincreasing = all(b <= a * (1 + _HAUSDORFF_SLACK) for a, b in zip(values, values[1:], strict=False))

    diameters = [r.diameter / r.v ** (1 / dim) for r in rows if r.diameter is not None]
    v0 = None
    for i, row in enumerate(rows):
        if all(r.components == 1 for r in rows[i:]):
            v0 = row.v
            break
    asym_ok = [
        r.asymmetry**2 <= 10 * max(r.deficit, 0.0) + 1e-12
        for r in rows
        if r.asymmetry is not None and r.deficit is not None
    ]
    return LadderStatistics(
        dim=dim,
        dstar=d,
        deficit_fit=deficit_fit,
        deficit_exponent_ok=deficit_ok,
        obstacle_fit=obstacle_fit,
        hausdorff_fit=hausdorff_fit,
        hausdorff_nonincreasing=nonincreasing,
        diameter_constant=max(diameters) if diameters else None,
        v0=v0,
        asymmetry_ok=asym_ok,
    )
