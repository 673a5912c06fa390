from collections.abc import Sequence

import pytest

from isores.errors.exceptions import IsoresInputError
from isores.geometry.bodies import ConvexBody, HPolyhedron
from isores.models.enums import RigidityVerdict
from isores.models.reports import ProfileRow, ProfileTable
from isores.profiles.closed_form import profile_free, profile_halfspace
from isores.residue import rigidity as rigidity_module
from isores.residue.rigidity import rigidity_check, rigidity_verdict

from ..helpers import table_from_perimeters

VOLUMES = [1.0, 4.0, 16.0, 64.0]


class TestHalfSpaceRegime:
    def test_matches(self) -> None:
        table = table_from_perimeters(2, 1, {v: 1.01 * profile_halfspace(v, 2) for v in VOLUMES})
        report = rigidity_verdict(table, 1)
        assert report.regime is RigidityVerdict.HALF_SPACE
        assert report.verdict is RigidityVerdict.HALF_SPACE
        assert report.max_deviation == pytest.approx(0.01)
        assert report.final_ratio == pytest.approx(1.01)
        assert report.trend_slope is None

    def test_deviation(self) -> None:
        table = table_from_perimeters(3, 2, {v: 1.2 * profile_halfspace(v, 3) for v in VOLUMES})
        report = rigidity_verdict(table, 2)
        assert report.regime is RigidityVerdict.HALF_SPACE
        assert report.verdict is RigidityVerdict.INCONCLUSIVE
        assert any("above" in note for note in report.diagnostics)

    def test_below_half_space_is_noted(self) -> None:
        perimeters = {v: profile_halfspace(v, 2) for v in VOLUMES}
        perimeters[16.0] *= 0.9
        report = rigidity_verdict(table_from_perimeters(2, 1, perimeters), 1)
        assert any("below the half-space profile" in note for note in report.diagnostics)


class TestFreeRegime:
    def test_flat_ratio(self) -> None:
        table = table_from_perimeters(3, 0, {v: 0.97 * profile_free(v, 3) for v in VOLUMES})
        report = rigidity_verdict(table, 0)
        assert report.regime is RigidityVerdict.FREE_PROFILE
        assert report.verdict is RigidityVerdict.FREE_PROFILE
        assert report.trend_slope == pytest.approx(0.0, abs=1e-9)
        assert report.final_ratio == pytest.approx(0.97)

    def test_approaching_free_profile(self) -> None:
        ratios = [0.9, 0.93, 0.95, 0.96]
        table = table_from_perimeters(3, 1, {v: r * profile_free(v, 3) for v, r in zip(VOLUMES, ratios, strict=True)})
        report = rigidity_verdict(table, 1)
        assert report.verdict is RigidityVerdict.FREE_PROFILE
        assert report.trend_slope is not None and report.trend_slope > 0

    def test_decreasing_ratio(self) -> None:
        ratios = [0.99, 0.97, 0.95, 0.94]
        table = table_from_perimeters(3, 0, {v: r * profile_free(v, 3) for v, r in zip(VOLUMES, ratios, strict=True)})
        report = rigidity_verdict(table, 0)
        assert report.verdict is RigidityVerdict.INCONCLUSIVE
        assert any("decreases" in note for note in report.diagnostics)

    def test_low_final_ratio(self) -> None:
        table = table_from_perimeters(3, 0, {v: 0.85 * profile_free(v, 3) for v in VOLUMES})
        report = rigidity_verdict(table, 0)
        assert report.verdict is RigidityVerdict.INCONCLUSIVE
        assert any("below" in note for note in report.diagnostics)


class TestSparseTables:
    def test_single_row(self) -> None:
        table = table_from_perimeters(2, 0, {1.0: profile_free(1.0, 2)})
        report = rigidity_verdict(table, 0)
        assert report.verdict is RigidityVerdict.INCONCLUSIVE
        assert report.ratios == [pytest.approx(1.0)]

    def test_error_rows(self) -> None:
        rows = [
            ProfileRow(v=1.0, perimeter=profile_free(1.0, 2)),
            ProfileRow(v=2.0, error="window infeasible"),
            ProfileRow(v=3.0, perimeter=profile_free(3.0, 2)),
        ]
        report = rigidity_verdict(ProfileTable(dim=2, dstar=0, rows=rows), 0)
        assert report.ratios[1] is None
        assert report.ratios[0] == pytest.approx(1.0)
        assert any("window infeasible" in note for note in report.diagnostics)
        assert report.verdict is RigidityVerdict.FREE_PROFILE


class TestRigidityCheck:
    def test_uses_given_dstar(self, monkeypatch: pytest.MonkeyPatch, unit_square: HPolyhedron) -> None:
        calls: list[int | None] = []

        def scan(body: ConvexBody | None, volumes: Sequence[float], *args: object, **kwargs: object) -> ProfileTable:
            dstar = kwargs.get("dstar")
            assert isinstance(dstar, int)
            calls.append(dstar)
            return table_from_perimeters(2, dstar, {v: 0.99 * profile_free(v, 2) for v in volumes})

        monkeypatch.setattr(rigidity_module, "scan", scan)
        report, table = rigidity_check(unit_square, VOLUMES, dstar=0)
        assert calls == [0]
        assert report.verdict is RigidityVerdict.FREE_PROFILE
        assert len(table.rows) == len(VOLUMES)

    def test_computes_dstar(self, monkeypatch: pytest.MonkeyPatch, unit_square: HPolyhedron) -> None:
        def scan(body: ConvexBody | None, volumes: Sequence[float], *args: object, **kwargs: object) -> ProfileTable:
            return table_from_perimeters(2, 0, {v: profile_free(v, 2) for v in volumes})

        monkeypatch.setattr(rigidity_module, "scan", scan)
        report, _ = rigidity_check(unit_square, VOLUMES)
        assert report.dstar == 0

    def test_passes_calibration_flag(self, monkeypatch: pytest.MonkeyPatch, unit_square: HPolyhedron) -> None:
        flags: list[object] = []

        def scan(body: ConvexBody | None, volumes: Sequence[float], *args: object, **kwargs: object) -> ProfileTable:
            flags.append(kwargs.get("calibrate"))
            return table_from_perimeters(2, 0, {v: profile_free(v, 2) for v in volumes})

        monkeypatch.setattr(rigidity_module, "scan", scan)
        rigidity_check(unit_square, VOLUMES, dstar=0, calibrate=True)
        rigidity_check(unit_square, VOLUMES, dstar=0)
        assert flags == [True, False]

    def test_free_space_needs_dim(self) -> None:
        with pytest.raises(IsoresInputError):
            rigidity_check(None, VOLUMES)
