"""Report files: CSV tables, JSON bundles, PGM slices and log-log SVG plots."""

from __future__ import annotations

import csv
import logging
from collections.abc import Sequence
from pathlib import Path
from typing import IO

import matplotlib
import numpy as np
from matplotlib.figure import Figure

from ..errors.exceptions import IsoresInputError
from ..gridsolver.domain import FREE, IN_SET, OBSTACLE, OUTSIDE, UInt8Array
from ..models.reports import ProfileTable, ScalingFit
from ..models.run import ReportBundle
from ..profiles.closed_form import improved_exponent, profile_free, profile_halfspace

logger = logging.getLogger("isores")

TABLE_COLUMNS = ("v", "I", "residue", "components", "diameter", "asymmetry", "deficit", "hd_norm", "method", "seed")
PROFILE_COLUMNS = ("v", "I_free", "I_halfspace", "source")

# PGM gray levels per cell class
GRAY_LEVELS = {FREE: 255, IN_SET: 0, OBSTACLE: 128, OUTSIDE: 224}


def _cell(value: object) -> str:
    if value is None:
        return ""
    if isinstance(value, float):
        return repr(value)
    return str(value)


def table_records(table: ProfileTable) -> list[list[str]]:
    return [
        [
            _cell(row.v),
            _cell(row.perimeter),
            _cell(row.residue),
            _cell(row.components),
            _cell(row.diameter),
            _cell(row.asymmetry),
            _cell(row.deficit),
            _cell(row.hd_norm),
            _cell(row.method if row.method is not None else row.source.value),
            _cell(row.seed),
        ]
        for row in table.rows
    ]


def emit_csv(table: ProfileTable, out: Path | IO[str]) -> None:
    """Write *table* with the fixed column order; an empty table gives the header alone."""
    _write_rows(TABLE_COLUMNS, table_records(table), out)


def emit_profile_csv(volumes: Sequence[float], dim: int, out: Path | IO[str]) -> None:
    """Closed-form free and half-space profiles along *volumes*."""
    records = [
        [_cell(float(v)), _cell(profile_free(v, dim)), _cell(profile_halfspace(v, dim)), "closed_form"]
        for v in volumes
    ]
    _write_rows(PROFILE_COLUMNS, records, out)


def _write_rows(header: Sequence[str], records: list[list[str]], out: Path | IO[str]) -> None:
    if isinstance(out, Path):
        with out.open("w", encoding="utf-8", newline="") as fh:
            _write_rows(header, records, fh)
        return
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(records)


def bundle_json(bundle: ReportBundle) -> str:
    return bundle.model_dump_json(indent=2) + "\n"


def emit_json(bundle: ReportBundle, path: Path) -> None:
    path.write_text(bundle_json(bundle), encoding="utf-8")
    logger.debug("Wrote %s", path)


def read_bundle(path: Path) -> ReportBundle:
    try:
        return ReportBundle.model_validate_json(path.read_text(encoding="utf-8"))
    except ValueError as e:
        raise IsoresInputError(f"{path} is not a report bundle: {e}", field="report", cause=e) from e


# -- images --------------------------------------------------------------------


def slice_plane(classes: UInt8Array, plane: int | None = None) -> UInt8Array:
    """The 2D section at index *plane* of the last axis (middle when ``None``); 2D arrays pass through."""
    if classes.ndim == 2:
        return classes
    if classes.ndim != 3:
        raise IsoresInputError("Slices are rendered from 2D or 3D grids only", field="planes")
    depth = classes.shape[2]
    index = depth // 2 if plane is None else plane
    if not 0 <= index < depth:
        raise IsoresInputError(f"Plane {index} outside 0..{depth - 1}", field="planes")
    return classes[:, :, index]


def render_slice(classes: UInt8Array, plane: int | None = None) -> bytes:
    """Binary PGM of one section: set black, obstacle gray, free white, outside the window light gray.

    The first axis runs left to right and the second bottom to top.
    """
    section = slice_plane(classes, plane)
    lut = np.zeros(256, dtype=np.uint8)
    for cls, level in GRAY_LEVELS.items():
        lut[cls] = level
    image = lut[section].T[::-1]
    height, width = image.shape
    header = f"P5\n{width} {height}\n255\n".encode("ascii")
    return header + np.ascontiguousarray(image).tobytes()


def render_loglog(fit: ScalingFit, path: Path) -> None:
    """Residue against volume in natural-log coordinates, with reference slopes.

    The admissible slopes ``d*/2N`` and ``d*/N`` are dashed lines through the
    data's centroid (gids ``reference-lower`` and ``reference-upper``); the
    improved exponent is dotted.
    """
    xs = np.asarray(fit.log_v, dtype=np.float64)
    ys = np.asarray(fit.log_residue, dtype=np.float64)
    if xs.size:
        x0, y0 = float(xs.mean()), float(ys.mean())
        span = np.array([xs.min(), xs.max()]) if np.ptp(xs) > 0 else np.array([x0 - 1.0, x0 + 1.0])
    else:
        x0, y0 = 0.0, 0.0
        span = np.array([-1.0, 1.0])

    with matplotlib.rc_context({"svg.hashsalt": "isores", "svg.fonttype": "none"}):
        fig = Figure(figsize=(6, 4.5))
        ax = fig.add_subplot()
        if xs.size:
            ax.plot(xs, ys, "o", color="black", label="residue", gid="residue-points")
        if fit.slope is not None and fit.intercept is not None:
            ax.plot(span, fit.intercept + fit.slope * span, "-", color="C0", label=f"fit {fit.slope:.3f}", gid="fit")
        d, n = fit.dstar, fit.dim
        references = (
            ("reference-lower", d / (2 * n), "--", "C1"),
            ("reference-upper", d / n, "--", "C2"),
            ("reference-improved", improved_exponent(d, n), ":", "C3"),
        )
        for gid, slope, style, color in references:
            ax.plot(span, y0 + slope * (span - x0), style, color=color, label=f"slope {slope:.3f}", gid=gid)
        ax.set_xlabel("log v")
        ax.set_ylabel("log residue")
        ax.set_title(f"N = {n}, d* = {d}: {fit.verdict.value}")
        ax.legend(loc="best")
        fig.savefig(path, format="svg", metadata={"Date": None})
    logger.debug("Wrote %s", path)
