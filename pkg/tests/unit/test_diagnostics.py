import math

import numpy as np
import pytest

from isores.errors.exceptions import IsoresInputError
from isores.gridsolver.diagnostics import (
    asymmetry_deficit,
    boundary_cells,
    count_components,
    diagnostics,
    envelopment,
    hausdorff_to_ball,
    lambda_violations,
    set_diameter,
)
from isores.gridsolver.domain import DiscreteSet, Grid, build_domain
from isores.models.reports import SolverConstants

from ..helpers import ball_mask, box


@pytest.fixture
def plane() -> Grid:
    return build_domain(None, math.pi, dim=2, cells_per_length=40)


@pytest.fixture
def disk(plane: Grid) -> DiscreteSet:
    return DiscreteSet(plane, ball_mask(plane, plane.center, 1.0))


def test_count_components() -> None:
    mask = np.zeros((8, 8), dtype=bool)
    mask[1:3, 1:3] = True
    mask[5:7, 5:7] = True
    assert count_components(mask) == 2
    diagonal = np.zeros((3, 3), dtype=bool)
    diagonal[0, 0] = diagonal[1, 1] = True
    assert count_components(diagonal) == 2


def test_set_diameter(disk: DiscreteSet) -> None:
    assert set_diameter(disk.grid, disk.mask) == pytest.approx(2.0, abs=2 * disk.grid.pitch)
    single = np.zeros(disk.grid.shape, dtype=bool)
    single[tuple(s // 2 for s in disk.grid.shape)] = True
    assert set_diameter(disk.grid, single) == 0.0


def test_boundary_cells(disk: DiscreteSet) -> None:
    edge = boundary_cells(disk)
    assert edge.any()
    assert not np.any(edge & ~disk.mask)
    assert int(edge.sum()) < disk.cells


class TestDiagnostics:
    def test_disk_passes(self, disk: DiscreteSet) -> None:
        diag = diagnostics(disk, SolverConstants.for_dim(2), math.pi)
        assert diag.components == 1
        assert diag.components_ok
        assert diag.diameter_ok
        assert diag.density_ok
        assert not diag.touches_window
        assert not diag.drift_flagged
        assert diag.mass_drift < 0.05
        assert diag.curvature_mean == pytest.approx(1.0, rel=0.3)
        assert diag.warnings == []

    def test_split_set_is_flagged(self, plane: Grid) -> None:
        mask = ball_mask(plane, plane.center + [-1.5, 0.0], 0.6) | ball_mask(plane, plane.center + [1.5, 0.0], 0.6)
        diag = diagnostics(DiscreteSet(plane, mask), SolverConstants.for_dim(2))
        assert diag.components == 2
        assert not diag.components_ok
        assert any("components" in w for w in diag.warnings)

    def test_empty_set(self, plane: Grid) -> None:
        with pytest.raises(IsoresInputError):
            diagnostics(DiscreteSet(plane, np.zeros(plane.shape, dtype=bool)), SolverConstants.for_dim(2))


class TestAsymmetry:
    def test_disk_is_symmetric(self, disk: DiscreteSet) -> None:
        asym = asymmetry_deficit(disk)
        assert asym.asymmetry < 0.05
        assert abs(asym.deficit) < 0.03
        np.testing.assert_allclose(asym.center, disk.grid.center, atol=2 * disk.grid.pitch)

    def test_long_rectangle(self, plane: Grid) -> None:
        pts = plane.centers(np.nonzero(np.ones(plane.shape, dtype=bool))).reshape(*plane.shape, 2) - plane.center
        mask = (np.abs(pts[..., 0]) <= 1.6) & (np.abs(pts[..., 1]) <= 0.4) & plane.free_mask
        asym = asymmetry_deficit(DiscreteSet(plane, mask))
        assert asym.asymmetry > 0.5
        assert asym.deficit > 0.2

    def test_hausdorff_to_ball(self, disk: DiscreteSet) -> None:
        asym = asymmetry_deficit(disk)
        hd = hausdorff_to_ball(disk, asym.center)
        assert hd is not None
        assert hd < 3 * disk.grid.pitch / math.sqrt(math.pi)


def test_lambda_violations(disk: DiscreteSet, plane: Grid) -> None:
    assert lambda_violations(disk, penalty=100.0, checks=12) == 0
    assert lambda_violations(disk, penalty=1.0, checks=0) == 0
    sparse = np.zeros(plane.shape, dtype=bool)
    sparse[10:-10:4, 10:-10:4] = True
    sparse &= plane.free_mask
    assert lambda_violations(DiscreteSet(plane, sparse), penalty=1.0, checks=10) >= 1


def test_envelopment() -> None:
    block = box([-0.1, -0.1], [0.1, 0.1])
    grid = build_domain(block, 1.0, cells_per_length=10)
    around = ball_mask(grid, [0.0, 0.0], 0.5)
    assert envelopment(DiscreteSet(grid, around)) > 0
    away = ball_mask(grid, [1.0, 0.0], 0.3)
    assert envelopment(DiscreteSet(grid, away)) == 0
