import numpy as np
import pytest

from isores.geometry.bodies import HalfSpace
from isores.gridsolver.annealing import AnnealOptions, anneal
from isores.gridsolver.candidates import candidate_halfball
from isores.gridsolver.domain import DiscreteSet, Grid, build_domain
from isores.gridsolver.perimeter import relative_perimeter
from isores.models.reports import SolverConstants

OPTIONS = AnnealOptions(sweeps=30, t0=0.3, cooling=0.9, seed=0)


@pytest.fixture
def half_plane_grid(lower_half_plane: HalfSpace) -> Grid:
    return build_domain(lower_half_plane, 1.0, cells_per_length=10)


def _lam(grid: Grid) -> float:
    return SolverConstants.for_dim(2).penalty(1.0) * grid.pitch


def _strip(grid: Grid) -> np.ndarray:
    """A 25 x 4 block of free cells lying on the half-plane."""
    mid = grid.shape[0] // 2
    mask = np.zeros(grid.shape, dtype=bool)
    mask[mid - 12 : mid + 13, mid + 1 : mid + 5] = True
    return mask


def test_stray_cells_are_dropped(half_plane_grid: Grid) -> None:
    n = half_plane_grid.target_cells(1.0)
    start = candidate_halfball(half_plane_grid, (n - 5) * half_plane_grid.cell_volume).mask.copy()
    mid = half_plane_grid.shape[0] // 2
    for di in (-8, -4, 0, 4, 8):
        start[mid + di, mid + 15] = True
    assert int(start.sum()) == n
    result = anneal(half_plane_grid, start, n, _lam(half_plane_grid), OPTIONS)
    assert result.improved
    assert int(result.mask.sum()) == n
    assert result.perimeter < relative_perimeter(DiscreteSet(half_plane_grid, start))
    assert result.accepted > 0


def test_never_worse_than_start(half_plane_grid: Grid) -> None:
    n = half_plane_grid.target_cells(1.0)
    start = candidate_halfball(half_plane_grid, 1.0)
    result = anneal(half_plane_grid, start.mask, n, _lam(half_plane_grid), OPTIONS)
    assert int(result.mask.sum()) == n
    assert result.perimeter <= relative_perimeter(start) + 1e-9
    assert not np.any(result.mask & ~half_plane_grid.free_mask)


def test_penalized_energy_at_exact_volume(half_plane_grid: Grid) -> None:
    n = half_plane_grid.target_cells(1.0)
    result = anneal(half_plane_grid, _strip(half_plane_grid), n, _lam(half_plane_grid), OPTIONS)
    assert result.penalized == pytest.approx(result.perimeter)


def test_seed_makes_runs_repeatable(half_plane_grid: Grid) -> None:
    n = half_plane_grid.target_cells(1.0)
    lam = _lam(half_plane_grid)
    a = anneal(half_plane_grid, _strip(half_plane_grid), n, lam, OPTIONS)
    b = anneal(half_plane_grid, _strip(half_plane_grid), n, lam, OPTIONS)
    np.testing.assert_array_equal(a.mask, b.mask)
    assert a.accepted == b.accepted


def test_volume_is_repaired(half_plane_grid: Grid) -> None:
    n = half_plane_grid.target_cells(1.0)
    start = _strip(half_plane_grid)
    shrunk = start.copy()
    shrunk[np.argwhere(start)[0][0], :] = False
    result = anneal(half_plane_grid, shrunk, n, 10.0, AnnealOptions(0, 0.3, 0.9, 0))
    assert int(result.mask.sum()) == n
    assert result.improved


def test_zero_sweeps_keep_a_good_start(half_plane_grid: Grid) -> None:
    n = half_plane_grid.target_cells(1.0)
    start = candidate_halfball(half_plane_grid, 1.0).mask
    result = anneal(half_plane_grid, start, n, _lam(half_plane_grid), AnnealOptions(0, 0.3, 0.9, 0))
    assert result.sweeps == 0
    assert result.accepted == 0
    assert result.perimeter <= relative_perimeter(DiscreteSet(half_plane_grid, start)) + 1e-9
