from __future__ import annotations

import pytest

from isores.models.enums import SolveMethod
from isores.models.reports import SolverSettings


@pytest.fixture
def fine_2d() -> SolverSettings:
    """Full pipeline at the default resolution."""
    return SolverSettings(method=SolveMethod.BOTH, cells_per_length=48)


@pytest.fixture
def coarse_3d() -> SolverSettings:
    """Annealing only; the relaxation is slow on 3D grids of this size."""
    return SolverSettings(method=SolveMethod.ANNEAL, cells_per_length=24, anneal_sweeps=60, lambda_checks=4)
