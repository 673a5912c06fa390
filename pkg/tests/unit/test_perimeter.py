import math

import numpy as np
import pytest

from isores.errors.exceptions import IsoresInputError
from isores.gridsolver.domain import FREE, IN_SET, OBSTACLE, DiscreteSet, build_domain
from isores.gridsolver.perimeter import (
    crofton_stencil,
    full_perimeter,
    obstacle_perimeter,
    pair_slices,
    perimeter_split,
    relative_perimeter,
)


def _disk_classes(n: int, radius: float) -> np.ndarray:
    c = (n - 1) / 2
    i, j = np.meshgrid(np.arange(n), np.arange(n), indexing="ij")
    classes = np.full((n, n), FREE, dtype=np.uint8)
    classes[(i - c) ** 2 + (j - c) ** 2 <= radius**2] = IN_SET
    return classes


class TestStencil:
    def test_planar(self) -> None:
        stencil = crofton_stencil(2)
        assert len(stencil) == 8
        assert stencil.reach == 2
        assert np.all(stencil.weights > 0)
        lengths = np.linalg.norm(stencil.offsets, axis=1)
        assert float(stencil.weights @ lengths) == pytest.approx(math.pi / 2)

    def test_spatial(self) -> None:
        stencil = crofton_stencil(3)
        assert len(stencil) == 13
        assert stencil.reach == 1
        lengths = np.linalg.norm(stencil.offsets, axis=1)
        assert float(stencil.weights @ lengths) == pytest.approx(2.0)

    def test_spatial_symmetry(self) -> None:
        stencil = crofton_stencil(3)
        axis = stencil.weights[np.sum(np.abs(stencil.offsets), axis=1) == 1]
        assert np.allclose(axis, axis[0])

    def test_unsupported_dimension(self) -> None:
        with pytest.raises(IsoresInputError):
            crofton_stencil(4)


def test_pair_slices() -> None:
    sa, sb = pair_slices((5, 5), (1, -1))
    arr = np.arange(25).reshape(5, 5)
    assert arr[sa].shape == arr[sb].shape == (4, 4)
    assert arr[sa][0, 0] == arr[0, 1]
    assert arr[sb][0, 0] == arr[1, 0]


class TestCroftonEstimates:
    def test_disk(self) -> None:
        pitch = 0.1
        classes = _disk_classes(101, 40.0)
        rel, obs = perimeter_split(classes, pitch)
        assert rel == pytest.approx(2 * math.pi * 4.0, rel=0.02)
        assert obs == 0.0

    def test_ball(self) -> None:
        n, radius = 41, 16.0
        c = (n - 1) / 2
        idx = np.indices((n, n, n))
        classes = np.full((n, n, n), FREE, dtype=np.uint8)
        classes[np.sum((idx - c) ** 2, axis=0) <= radius**2] = IN_SET
        rel, _ = perimeter_split(classes, 1.0)
        assert rel == pytest.approx(4 * math.pi * radius**2, rel=0.03)

    def test_half_disk_on_obstacle(self) -> None:
        n, radius = 101, 40.0
        c = (n - 1) // 2
        classes = _disk_classes(n, radius)
        classes[:, :c] = OBSTACLE
        rel, obs = perimeter_split(classes, 1.0)
        assert rel == pytest.approx(math.pi * radius, rel=0.04)
        assert obs == pytest.approx(2 * radius, rel=0.04)

    def test_empty(self) -> None:
        rel, obs = perimeter_split(np.full((10, 10), FREE, dtype=np.uint8), 0.5)
        assert rel == 0.0
        assert obs == 0.0

    def test_scales_with_pitch(self) -> None:
        classes = _disk_classes(41, 15.0)
        a, _ = perimeter_split(classes, 1.0)
        b, _ = perimeter_split(classes, 0.5)
        assert b == pytest.approx(0.5 * a)


def test_discrete_set_wrappers() -> None:
    grid = build_domain(None, math.pi, dim=2, cells_per_length=48)
    centers = grid.centers(np.nonzero(np.ones(grid.shape, dtype=bool))).reshape(*grid.shape, 2)
    mask = np.linalg.norm(centers - grid.center, axis=-1) <= 1.0
    dset = DiscreteSet(grid, mask)
    assert relative_perimeter(dset) == pytest.approx(2 * math.pi, rel=0.03)
    assert obstacle_perimeter(dset) == 0.0
    assert full_perimeter(dset) == pytest.approx(relative_perimeter(dset))
