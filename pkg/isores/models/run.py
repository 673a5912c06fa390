from __future__ import annotations

from pathlib import Path

from pydantic import BaseModel, Field, PositiveFloat, field_validator, model_validator

from ..config.constants import DEFAULT_CELLS_PER_LENGTH, DEFAULT_SEED, MAX_CELLS_PER_AXIS
from .enums import Command, SolveMethod
from .reports import (
    DstarReport,
    LadderStatistics,
    ProfileTable,
    RecessionReport,
    RigidityReport,
    SandwichReport,
    ScalingFit,
    SolverConstants,
    SolverSettings,
    SolveReport,
)


class RunConfig(BaseModel):
    """One validated command-line invocation."""

    model_config = {"extra": "forbid"}

    command: Command
    body: Path | None = None
    dim: int | None = Field(None, ge=2, le=8)
    volume: PositiveFloat | None = None
    volumes: list[PositiveFloat] = []
    window: PositiveFloat | None = None
    pitch: PositiveFloat | None = None
    cells_per_length: int = Field(DEFAULT_CELLS_PER_LENGTH, ge=4, le=MAX_CELLS_PER_AXIS)
    seed: int = Field(DEFAULT_SEED, ge=0, lt=2**64)
    method: SolveMethod = SolveMethod.BOTH
    schedule: list[PositiveFloat] = []
    gammas: list[PositiveFloat] = []
    radii: list[PositiveFloat] = []
    dstar: int | None = Field(None, ge=0, le=8)
    alpha: PositiveFloat | None = None
    construction: bool = False
    envelopment: bool = False
    calibrate: bool = False
    table: Path | None = None
    report: Path | None = None
    output: Path | None = None
    svg: Path | None = None
    render: bool = False
    planes: list[int] = []
    threads: int | None = Field(None, ge=1)
    timings: bool = False
    verbose: bool = False
    constants: SolverConstants | None = None

    @field_validator("volumes")
    @classmethod
    def _increasing(cls, values: list[float]) -> list[float]:
        if any(b <= a for a, b in zip(values, values[1:], strict=False)):
            raise ValueError("volumes must be strictly increasing")
        return values

    @model_validator(mode="after")
    def _required(self) -> RunConfig:
        needs = {
            Command.DSTAR: ("body",),
            Command.RECESSION: ("body",),
            Command.SOLVE: ("volume",),
            Command.SCAN: ("volumes",),
            Command.COMPARE: ("body", "volumes"),
            Command.FIT: ("table",),
            Command.RENDER: ("report",),
        }
        for name in needs.get(self.command, ()):
            if not getattr(self, name):
                raise ValueError(f"{self.command.value} needs --{name}")
        if self.command in (Command.SOLVE, Command.SCAN, Command.PROFILE) and self.body is None and self.dim is None:
            raise ValueError(f"{self.command.value} needs --body or --dim")
        if self.construction and (self.body is None or not self.radii):
            raise ValueError("--construction needs --body (a cylinder) and --radii")
        if self.command is Command.PROFILE and not self.construction and not self.volumes:
            raise ValueError("profile needs --volumes")
        if self.render and self.output is None:
            raise ValueError("--render needs --output")
        return self

    def solver_settings(self) -> SolverSettings:
        return SolverSettings(
            method=self.method,
            window=self.window,
            pitch=self.pitch,
            cells_per_length=self.cells_per_length,
            seed=self.seed,
            check_envelopment=self.envelopment,
        )


class ReportBundle(BaseModel):
    """Everything one command produced, plus the configuration that produced it.

    Timings are only recorded on request so that repeated runs serialize to
    identical bytes.
    """

    tool: str = "isores"
    version: str
    command: Command
    config: RunConfig | None = None
    timings: dict[str, float] = {}
    solve: SolveReport | None = None
    table: ProfileTable | None = None
    fit: ScalingFit | None = None
    statistics: LadderStatistics | None = None
    dstar: DstarReport | None = None
    recession: RecessionReport | None = None
    sandwich: SandwichReport | None = None
    rigidity: RigidityReport | None = None
