from .bodies import (
    BallDescription,
    BodyDescription,
    BodyFile,
    CylinderDescription,
    FreeDescription,
    HalfSpaceDescription,
    HPolyDescription,
    InequalitySet,
    OracleGridDescription,
    ParaboloidDescription,
)
from .enums import (
    Command,
    Confidence,
    DstarMethod,
    ProfileSource,
    RigidityVerdict,
    SolveMethod,
    Verdict,
)
from .reports import (
    DstarReport,
    GridCalibration,
    LadderStatistics,
    MaskEncoding,
    PowerLawFit,
    ProfileRow,
    ProfileTable,
    RecessionReport,
    RigidityReport,
    SandwichReport,
    ScalingFit,
    ScheduleEntry,
    SolverConstants,
    SolverSettings,
    SolveReport,
)
from .run import ReportBundle, RunConfig

__all__ = [
    "BallDescription",
    "BodyDescription",
    "BodyFile",
    "Command",
    "Confidence",
    "CylinderDescription",
    "DstarMethod",
    "DstarReport",
    "FreeDescription",
    "GridCalibration",
    "HPolyDescription",
    "HalfSpaceDescription",
    "InequalitySet",
    "LadderStatistics",
    "MaskEncoding",
    "OracleGridDescription",
    "ParaboloidDescription",
    "PowerLawFit",
    "ProfileRow",
    "ProfileSource",
    "ProfileTable",
    "RecessionReport",
    "ReportBundle",
    "RigidityReport",
    "RigidityVerdict",
    "RunConfig",
    "SandwichReport",
    "ScalingFit",
    "ScheduleEntry",
    "SolveMethod",
    "SolveReport",
    "SolverConstants",
    "SolverSettings",
    "Verdict",
]
