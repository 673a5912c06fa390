import io
from pathlib import Path

import numpy as np
import pytest

from isores.cli.output import (
    GRAY_LEVELS,
    TABLE_COLUMNS,
    emit_csv,
    emit_profile_csv,
    read_bundle,
    render_loglog,
    render_slice,
    slice_plane,
)
from isores.errors.exceptions import IsoresInputError
from isores.gridsolver.domain import FREE, IN_SET, OBSTACLE, OUTSIDE
from isores.models.enums import Verdict
from isores.models.reports import ProfileRow, ProfileTable, ScalingFit


def test_empty_table_is_header_only() -> None:
    out = io.StringIO()
    emit_csv(ProfileTable(dim=2), out)
    assert out.getvalue() == ",".join(TABLE_COLUMNS) + "\n"


def test_rows_and_blanks(tmp_path: Path) -> None:
    table = ProfileTable(
        dim=2,
        rows=[
            ProfileRow(v=1.0, perimeter=3.5, residue=0.044, components=1, method="anneal", seed=3),
            ProfileRow(v=2.0, error="window infeasible", method="anneal", seed=3),
        ],
    )
    path = tmp_path / "t.csv"
    emit_csv(table, path)
    lines = path.read_text(encoding="utf-8").splitlines()
    assert lines[1].split(",") == ["1.0", "3.5", "0.044", "1", "", "", "", "", "anneal", "3"]
    assert lines[2].split(",")[:3] == ["2.0", "", ""]


def test_construction_rows_name_their_source() -> None:
    out = io.StringIO()
    emit_csv(ProfileTable(dim=3, rows=[ProfileRow(v=5.0, perimeter=1.0, source="construction")]), out)
    assert out.getvalue().splitlines()[1].split(",")[-2] == "construction"


def test_profile_csv() -> None:
    out = io.StringIO()
    emit_profile_csv([1.0, 8.0], 3, out)
    lines = out.getvalue().splitlines()
    assert lines[0] == "v,I_free,I_halfspace,source"
    assert len(lines) == 3


class TestSlices:
    def test_pgm_layout(self) -> None:
        classes = np.array([[FREE, IN_SET, OUTSIDE], [OBSTACLE, FREE, FREE]], dtype=np.uint8)
        data = render_slice(classes)
        header = b"P5\n2 3\n255\n"
        assert data.startswith(header)
        pixels = np.frombuffer(data[len(header) :], dtype=np.uint8).reshape(3, 2)
        # top row of the image is the last index of the second axis
        assert list(pixels[0]) == [GRAY_LEVELS[OUTSIDE], GRAY_LEVELS[FREE]]
        assert list(pixels[2]) == [GRAY_LEVELS[FREE], GRAY_LEVELS[OBSTACLE]]

    def test_middle_plane(self) -> None:
        classes = np.zeros((4, 4, 5), dtype=np.uint8)
        classes[:, :, 2] = IN_SET
        assert np.all(slice_plane(classes) == IN_SET)
        assert np.all(slice_plane(classes, 0) == FREE)

    @pytest.mark.parametrize("plane", [-1, 5])
    def test_plane_out_of_range(self, plane: int) -> None:
        with pytest.raises(IsoresInputError):
            slice_plane(np.zeros((4, 4, 5), dtype=np.uint8), plane)

    def test_one_dimensional(self) -> None:
        with pytest.raises(IsoresInputError):
            slice_plane(np.zeros(4, dtype=np.uint8))


def test_loglog_without_points(tmp_path: Path) -> None:
    fit = ScalingFit(
        dim=3,
        dstar=1,
        slope=None,
        intercept=None,
        r2=None,
        n_points=0,
        decades=0.0,
        window_low=0.1,
        window_high=0.4,
        verdict=Verdict.INCONCLUSIVE,
    )
    path = tmp_path / "empty.svg"
    render_loglog(fit, path)
    svg = path.read_text(encoding="utf-8")
    assert 'id="reference-improved"' in svg
    assert 'id="residue-points"' not in svg


def test_read_bundle_rejects_garbage(tmp_path: Path) -> None:
    path = tmp_path / "x.json"
    path.write_text('{"tool": "isores"}', encoding="utf-8")
    with pytest.raises(IsoresInputError) as exc:
        read_bundle(path)
    assert exc.value.field == "report"
