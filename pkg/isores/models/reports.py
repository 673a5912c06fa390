from __future__ import annotations

from typing import Any

import numpy as np
from pydantic import BaseModel, Field, model_validator

from ..config.constants import (
    DEFAULT_ANNEAL_COOLING,
    DEFAULT_ANNEAL_SWEEPS,
    DEFAULT_ANNEAL_T0,
    DEFAULT_BINARIZE_ROUNDS,
    DEFAULT_CELLS_PER_LENGTH,
    DEFAULT_GAP_TARGET,
    DEFAULT_RELAX_ITERATIONS,
    DEFAULT_SEED,
    MAX_CELLS_PER_AXIS,
    MAX_DIMENSION,
    MIN_DIMENSION,
)
from ..profiles.closed_form import window_floor
from .bodies import BodyDescription
from .enums import Confidence, DstarMethod, ProfileSource, RigidityVerdict, SolveMethod, Verdict

# -- configuration values ----------------------------------------------------


class SolverConstants(BaseModel):
    """Structural constants of the penalized problem.

    ``R0`` is fixed by the dimension; ``Lambda0`` defaults to ``4N``. The
    remaining constants are thresholds for the minimizer diagnostics
    (component count, diameter, density radius and density floor).
    """

    model_config = {"extra": "forbid"}

    dim: int = Field(ge=MIN_DIMENSION, le=MAX_DIMENSION)
    R0: float
    Lambda0: float = Field(gt=0)
    I0: int = Field(1, ge=1)
    d0: float = Field(4.0, gt=0)
    r0: float = Field(0.25, gt=0)
    c0: float = Field(0.1, gt=0)

    @model_validator(mode="before")
    @classmethod
    def _fill_derived(cls, data: Any) -> Any:
        if isinstance(data, dict):
            dim = data.get("dim")
            if isinstance(dim, int) and MIN_DIMENSION <= dim <= MAX_DIMENSION:
                data = dict(data)
                data.setdefault("R0", window_floor(dim))
                data.setdefault("Lambda0", 4.0 * dim)
        return data

    @model_validator(mode="after")
    def _check_r0(self) -> SolverConstants:
        expected = window_floor(self.dim)
        if abs(self.R0 - expected) > 1e-12:
            raise ValueError(f"R0 must equal (2/omega_N)^(1/N) + 1 = {expected!r}")
        return self

    @classmethod
    def for_dim(cls, dim: int, **overrides: Any) -> SolverConstants:
        return cls.model_validate({"dim": dim, **overrides})

    def penalty(self, v: float) -> float:
        """Volume penalty ``Lambda0 v^(-1/N)``."""
        return self.Lambda0 * v ** (-1 / self.dim)


class SolverSettings(BaseModel):
    """Numerical knobs of one grid solve.

    :param window: Window multiple ``R`` (``None`` uses ``R0``).
    :param pitch: Grid pitch; ``None`` derives it as ``v^(1/N) / cells_per_length``.
    :param gap_target: Relative duality gap at which the relaxation stops.
    :param binarize_rounds: Concave-penalty rounds pushing the relaxed field to 0/1.
    :param lambda_checks: Random local perturbations in the penalized-minimality check.
    :param keep_mask: Store the minimizer (run-length encoded) in the report.
    """

    model_config = {"extra": "forbid"}

    method: SolveMethod = SolveMethod.BOTH
    window: float | None = Field(None, gt=0)
    pitch: float | None = Field(None, gt=0)
    cells_per_length: int = Field(DEFAULT_CELLS_PER_LENGTH, ge=4, le=MAX_CELLS_PER_AXIS)
    seed: int = Field(DEFAULT_SEED, ge=0, lt=2**64)
    relax_iterations: int = Field(DEFAULT_RELAX_ITERATIONS, ge=1)
    gap_target: float = Field(DEFAULT_GAP_TARGET, gt=0)
    binarize_rounds: int = Field(DEFAULT_BINARIZE_ROUNDS, ge=0)
    anneal_sweeps: int = Field(DEFAULT_ANNEAL_SWEEPS, ge=0)
    anneal_t0: float = Field(DEFAULT_ANNEAL_T0, gt=0)
    anneal_cooling: float = Field(DEFAULT_ANNEAL_COOLING, gt=0, lt=1)
    lambda_checks: int = Field(16, ge=0)
    check_envelopment: bool = False
    keep_mask: bool = True


# -- solver output -----------------------------------------------------------


class MaskEncoding(BaseModel):
    """Run-length encoded cell classes in C order.

    Runs alternate between "off" and "on", starting with "off".
    """

    shape: list[int]
    pitch: float
    origin: list[float]
    set_runs: list[int]
    obstacle_runs: list[int]
    window_runs: list[int]


class SolveReport(BaseModel):
    dim: int
    v_target: float
    v_achieved: float
    pitch: float
    window_multiple: float
    window_radius: float
    anchor: list[float]

    energy: float
    penalized_energy: float
    perimeter_free: float
    perimeter_obstacle: float

    components: int
    diameter: float
    asymmetry: float
    deficit: float
    ball_center: list[float]
    hd_norm: float | None

    curvature_mean: float | None
    curvature_spread: float | None
    curvature_max: float | None
    curvature_bound: float
    density_min: float | None
    density_ok: bool
    components_ok: bool
    diameter_ok: bool
    lambda_violations: int
    lambda_checks: int
    mass_drift: float
    drift_flagged: bool
    envelopment: int | None = None

    relaxed_energy: float | None = None
    relaxed_gap: float | None = None
    relax_iterations: int = 0
    converged: bool | None = None

    method: SolveMethod
    seed: int
    start: str
    warnings: list[str] = []
    minimizer: MaskEncoding | None = None


# -- profile tables ------------------------------------------------------------


class GridCalibration(BaseModel):
    """Free-space perimeter ratio ``P_grid / I_free`` of the grid solver, per volume.

    With a pitch derived from ``cells_per_length`` the free problem is the
    same at every volume up to scale, so a single entry serves the whole
    ladder (``scale_invariant``).
    """

    dim: int
    volumes: list[float]
    ratios: list[float]
    scale_invariant: bool = False

    @model_validator(mode="after")
    def _paired(self) -> GridCalibration:
        if not self.ratios or len(self.ratios) != len(self.volumes):
            raise ValueError("Calibration needs one ratio per volume")
        if any(r <= 0 for r in self.ratios):
            raise ValueError("Calibration ratios must be positive")
        return self

    def ratio_at(self, v: float) -> float:
        if self.scale_invariant or len(self.ratios) == 1:
            return self.ratios[0]
        # log-linear between calibrated volumes, clamped at the ends
        return float(np.interp(np.log(v), np.log(self.volumes), self.ratios))


class ProfileRow(BaseModel):
    v: float
    perimeter: float | None = None
    residue: float | None = None
    source: ProfileSource = ProfileSource.GRID_SOLVER
    components: int | None = None
    diameter: float | None = None
    asymmetry: float | None = None
    deficit: float | None = None
    hd_norm: float | None = None
    perimeter_obstacle: float | None = None
    raw_perimeter: float | None = None
    perimeter_ratio: float | None = None
    method: str | None = None
    seed: int | None = None
    negative_residue: bool = False
    error: str | None = None
    report: SolveReport | None = None

    @property
    def usable(self) -> bool:
        return self.error is None and self.perimeter is not None


class ProfileTable(BaseModel):
    dim: int
    body: BodyDescription | None = None
    dstar: int | None = None
    settings: SolverSettings | None = None
    constants: SolverConstants | None = None
    calibration: GridCalibration | None = None
    rows: list[ProfileRow] = []

    @model_validator(mode="after")
    def _increasing(self) -> ProfileTable:
        vs = [row.v for row in self.rows]
        if any(b <= a for a, b in zip(vs, vs[1:], strict=False)):
            raise ValueError("Profile volumes must be strictly increasing")
        return self


class PowerLawFit(BaseModel):
    """Least-squares fit ``y = prefactor * x^exponent`` in log-log coordinates."""

    exponent: float
    prefactor: float
    r2: float
    n_points: int


class ScalingFit(BaseModel):
    dim: int
    dstar: int
    slope: float | None
    intercept: float | None
    r2: float | None
    n_points: int
    decades: float
    window_low: float
    window_high: float
    verdict: Verdict
    log_v: list[float] = []
    log_residue: list[float] = []
    message: str | None = None


class LadderStatistics(BaseModel):
    dim: int
    dstar: int
    deficit_fit: PowerLawFit | None = None
    deficit_exponent_ok: bool | None = None
    obstacle_fit: PowerLawFit | None = None
    hausdorff_fit: PowerLawFit | None = None
    hausdorff_nonincreasing: bool | None = None
    diameter_constant: float | None = None
    v0: float | None = None
    asymmetry_ok: list[bool] = []


# -- structure and dimension reports ------------------------------------------


class ScheduleEntry(BaseModel):
    gamma: float
    n: float
    scale: float
    estimate: int
    extents: list[float]


class DstarReport(BaseModel):
    dim: int
    dstar: int
    method: DstarMethod
    confidence: Confidence
    singular_values: list[float] = []
    rays: list[list[float]] = []
    witness: list[ScheduleEntry] = []
    stable_gammas: list[float] = []
    warnings: list[str] = []


class RecessionReport(BaseModel):
    dim: int
    A: list[list[float]]
    rays: list[list[float]]
    lineality: list[list[float]]
    span_dim: int
    z_basis: list[list[float]] = []
    cross_section_A: list[list[float]] = []
    cross_section_b: list[float] = []


class SandwichReport(BaseModel):
    dim: int
    dstar: int
    z_basis: list[list[float]]
    body_table: ProfileTable
    cylinder_table: ProfileTable
    perimeter_gaps: list[float | None]
    residue_gaps: list[float | None]
    perimeter_ok: bool
    residue_ok: bool
    gap_fit: PowerLawFit | None = None
    expected_exponent: float
    verdict: Verdict


class RigidityReport(BaseModel):
    dim: int
    dstar: int
    regime: RigidityVerdict
    ratios: list[float | None]
    max_deviation: float | None = None
    final_ratio: float | None = None
    trend_slope: float | None = None
    verdict: RigidityVerdict
    diagnostics: list[str] = []

