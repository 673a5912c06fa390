from __future__ import annotations

import json
from pathlib import Path

import numpy as np
import pytest

from isores.geometry.bodies import CylinderBody, HalfSpace, HPolyhedron

from .helpers import box, slab


@pytest.fixture
def unit_square() -> HPolyhedron:
    return box([0.0, 0.0], [1.0, 1.0])


@pytest.fixture
def cube3() -> HPolyhedron:
    return box([0.0, 0.0, 0.0], [1.0, 1.0, 1.0])


@pytest.fixture
def slab3() -> HPolyhedron:
    return slab(3)


@pytest.fixture
def orthant3() -> HPolyhedron:
    return HPolyhedron.from_inequalities(-np.eye(3), np.zeros(3))


@pytest.fixture
def prism() -> HPolyhedron:
    """``[0, inf) x [-1, 1]^2``."""
    A = np.array([[-1.0, 0, 0], [0, 1, 0], [0, -1, 0], [0, 0, 1], [0, 0, -1]])
    return HPolyhedron.from_inequalities(A, [0.0, 1, 1, 1, 1])


@pytest.fixture
def lower_half_plane() -> HalfSpace:
    """Obstacle ``{y <= 0}``; the free side is ``y > 0``."""
    return HalfSpace(np.array([0.0, 1.0]), 0.0)


@pytest.fixture
def square_cylinder(unit_square: HPolyhedron) -> CylinderBody:
    """``R x [0, 1]^2`` in R^3."""
    return CylinderBody.axis_aligned(3, [0], unit_square)


@pytest.fixture
def slab_file(tmp_path: Path) -> Path:
    path = tmp_path / "slab.json"
    path.write_text(
        json.dumps({"kind": "hpoly", "dim": 3, "A": [[0, 0, 1], [0, 0, -1]], "b": [1, 0]}),
        encoding="utf-8",
    )
    return path


@pytest.fixture
def cylinder_file(tmp_path: Path) -> Path:
    path = tmp_path / "cyl.json"
    body = {
        "kind": "cylinder",
        "dim": 3,
        "z_basis": [[1, 0, 0]],
        "cross_section": {"vertices": [[0, 0], [1, 0], [1, 1], [0, 1]]},
    }
    path.write_text(json.dumps(body), encoding="utf-8")
    return path
