from __future__ import annotations

from enum import StrEnum


class ProfileSource(StrEnum):
    CLOSED_FORM = "closed_form"
    GRID_SOLVER = "grid_solver"
    CONSTRUCTION = "construction"


class SolveMethod(StrEnum):
    RELAX = "relax"
    ANNEAL = "anneal"
    BOTH = "both"


class DstarMethod(StrEnum):
    POLYHEDRAL = "polyhedral"
    ORACLE = "oracle"
    BOUNDED = "bounded"


class Confidence(StrEnum):
    EXACT = "exact"
    STABLE = "stable"
    PARTIAL = "partial"


class Verdict(StrEnum):
    CONSISTENT = "consistent"
    INCONSISTENT = "inconsistent"
    INCONCLUSIVE = "inconclusive"


class RigidityVerdict(StrEnum):
    HALF_SPACE = "half-space"
    FREE_PROFILE = "free-profile"
    INCONCLUSIVE = "inconclusive"


class Command(StrEnum):
    DSTAR = "dstar"
    RECESSION = "recession"
    PROFILE = "profile"
    SOLVE = "solve"
    SCAN = "scan"
    FIT = "fit"
    COMPARE = "compare"
    RENDER = "render"
