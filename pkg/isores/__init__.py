"""isores - exterior isoperimetric profiles and residues of convex obstacles."""

from ._version import __version__
from .asymdim.report import dstar_report, recession_report

# Configuration
from .config.settings import IsoresSettings, get_settings

# Errors
from .errors.exceptions import (
    ConstructionError,
    DegenerateBodyError,
    DisjointWindowError,
    InfeasibleVolumeError,
    IsoresError,
    IsoresInputError,
    NoDecompositionError,
    NoStableLimitError,
    ResolutionError,
    SolverError,
)

# Bodies
from .geometry.bodies import ConvexBody, CylinderBody, HalfSpace, HPolyhedron, SupportOracle, ball, paraboloid
from .geometry.loader import build_body, load_body, parse_body

# Solver and profiles
from .gridsolver.solver import solve, solve_volume
from .models.reports import ProfileTable, SolverConstants, SolverSettings, SolveReport
from .models.run import ReportBundle, RunConfig
from .profiles.closed_form import profile_free, profile_halfspace, residue
from .profiles.construction import ball_attachment
from .residue.fitting import fit_scaling, ladder_statistics
from .residue.rigidity import rigidity_check
from .residue.sandwich import cylinder_sandwich
from .residue.scan import ladder, scan

__all__ = [
    "__version__",
    "ConstructionError",
    "ConvexBody",
    "CylinderBody",
    "DegenerateBodyError",
    "DisjointWindowError",
    "HPolyhedron",
    "HalfSpace",
    "InfeasibleVolumeError",
    "IsoresError",
    "IsoresInputError",
    "IsoresSettings",
    "NoDecompositionError",
    "NoStableLimitError",
    "ProfileTable",
    "ReportBundle",
    "ResolutionError",
    "RunConfig",
    "SolveReport",
    "SolverConstants",
    "SolverError",
    "SolverSettings",
    "SupportOracle",
    "ball",
    "ball_attachment",
    "build_body",
    "cylinder_sandwich",
    "dstar_report",
    "fit_scaling",
    "get_settings",
    "ladder",
    "ladder_statistics",
    "load_body",
    "paraboloid",
    "parse_body",
    "profile_free",
    "profile_halfspace",
    "recession_report",
    "residue",
    "rigidity_check",
    "scan",
    "solve",
    "solve_volume",
]
