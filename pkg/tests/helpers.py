"""Body and report builders shared by the unit and integration tests."""

from __future__ import annotations

from typing import Any

import numpy as np
import numpy.typing as npt

from isores.geometry.bodies import BoolArray, HPolyhedron
from isores.gridsolver.domain import Grid
from isores.models.enums import SolveMethod
from isores.models.reports import ProfileRow, ProfileTable, SolveReport
from isores.profiles.closed_form import profile_free, residue


def box(lo: list[float], hi: list[float]) -> HPolyhedron:
    """Axis-aligned box ``[lo, hi]`` as an obstacle."""
    n = len(lo)
    eye = np.eye(n)
    return HPolyhedron.from_inequalities(np.vstack([eye, -eye]), np.concatenate([hi, [-x for x in lo]]))


def slab(dim: int) -> HPolyhedron:
    """``R^(N-1) x [0, 1]``."""
    A = np.zeros((2, dim))
    A[0, -1] = 1.0
    A[1, -1] = -1.0
    return HPolyhedron.from_inequalities(A, [1.0, 0.0])


def fake_report(v: float, dim: int, energy: float, **overrides: Any) -> SolveReport:
    """A solve report with plausible diagnostics for a set of perimeter *energy*."""
    values: dict[str, Any] = {
        "dim": dim,
        "v_target": v,
        "v_achieved": v,
        "pitch": 0.1,
        "window_multiple": 2.0,
        "window_radius": 2.0 * v ** (1 / dim),
        "anchor": [0.0] * dim,
        "energy": energy,
        "penalized_energy": energy,
        "perimeter_free": energy,
        "perimeter_obstacle": 0.5 * energy,
        "components": 1,
        "diameter": 2.0 * v ** (1 / dim),
        "asymmetry": 0.01,
        "deficit": 0.02,
        "ball_center": [0.0] * dim,
        "hd_norm": 0.05,
        "curvature_mean": None,
        "curvature_spread": None,
        "curvature_max": None,
        "curvature_bound": 1.0,
        "density_min": 0.5,
        "density_ok": True,
        "components_ok": True,
        "diameter_ok": True,
        "lambda_violations": 0,
        "lambda_checks": 0,
        "mass_drift": 0.1,
        "drift_flagged": False,
        "method": SolveMethod.ANNEAL,
        "seed": 0,
        "start": "halfball",
    }
    values.update(overrides)
    return SolveReport(**values)


def residue_table(dim: int, dstar: int, volumes: list[float], exponent: float, prefactor: float = 0.5) -> ProfileTable:
    """Synthetic ladder with ``residue = prefactor * v^exponent``."""
    rows = []
    for v in volumes:
        r = prefactor * v**exponent
        rows.append(
            ProfileRow(
                v=v,
                perimeter=profile_free(v, dim) - r,
                residue=r,
                components=1,
                diameter=2.0 * v ** (1 / dim),
                asymmetry=0.1 * v**-0.2,
                deficit=0.05 * v**-0.4,
                hd_norm=0.2 * v**-0.1,
                perimeter_obstacle=v ** ((dim - 1) / dim),
                method="anneal",
                seed=0,
            )
        )
    return ProfileTable(dim=dim, dstar=dstar, rows=rows)


def table_from_perimeters(dim: int, dstar: int, perimeters: dict[float, float]) -> ProfileTable:
    rows = [
        ProfileRow(v=v, perimeter=p, residue=residue(v, p, dim), components=1)
        for v, p in sorted(perimeters.items())
    ]
    return ProfileTable(dim=dim, dstar=dstar, rows=rows)


def ball_mask(grid: Grid, center: npt.ArrayLike, radius: float) -> BoolArray:
    """Free cells of *grid* whose centers lie within *radius* of *center*."""
    pts = grid.centers(np.nonzero(np.ones(grid.shape, dtype=bool))).reshape(*grid.shape, grid.dim)
    inside = np.linalg.norm(pts - np.asarray(center, dtype=np.float64), axis=-1) <= radius
    return np.asarray(inside & grid.free_mask)
