import importlib

import pytest
from pydantic import ValidationError

from isores.errors.exceptions import InfeasibleVolumeError, IsoresInputError, SolverError
from isores.geometry.bodies import CylinderBody, HalfSpace
from isores.models.enums import ProfileSource, SolveMethod
from isores.models.reports import GridCalibration, MaskEncoding, SolverConstants, SolverSettings, SolveReport
from isores.profiles.closed_form import profile_free, residue
from isores.residue.scan import construction_table, grid_calibration, ladder, row_from_report, scan

from ..helpers import fake_report

scan_module = importlib.import_module("isores.residue.scan")


class TestLadder:
    def test_default(self) -> None:
        vs = ladder(1.0)
        assert len(vs) == 8
        assert vs[1] == 4.0
        assert vs[-1] == 4.0**7

    def test_custom(self) -> None:
        assert ladder(2.0, length=3, ratio=10.0) == [2.0, 20.0, 200.0]

    @pytest.mark.parametrize(("v_min", "length", "ratio"), [(0.0, 3, 2.0), (1.0, 0, 2.0), (1.0, 3, 1.0)])
    def test_rejects(self, v_min: float, length: int, ratio: float) -> None:
        with pytest.raises(IsoresInputError):
            ladder(v_min, length, ratio)


class TestRowFromReport:
    def test_fields(self) -> None:
        report = fake_report(4.0, 2, 7.0)
        row = row_from_report(4.0, report)
        assert row.perimeter == 7.0
        assert row.residue == pytest.approx(profile_free(4.0, 2) - 7.0)
        assert row.source is ProfileSource.GRID_SOLVER
        assert row.method == "anneal"
        assert not row.negative_residue
        assert row.report is not None

    def test_negative_residue(self) -> None:
        report = fake_report(1.0, 2, profile_free(1.0, 2) + 0.5)
        assert row_from_report(1.0, report).negative_residue

    def test_mask_dropped_unless_kept(self) -> None:
        mask = MaskEncoding(
            shape=[2, 2], pitch=1.0, origin=[0.0, 0.0], set_runs=[0, 1], obstacle_runs=[], window_runs=[0, 4]
        )
        report = fake_report(1.0, 2, 3.0, minimizer=mask)
        dropped = row_from_report(1.0, report)
        assert dropped.report is not None and dropped.report.minimizer is None
        kept = row_from_report(1.0, report, keep_mask=True)
        assert kept.report is not None and kept.report.minimizer == mask


class TestScan:
    @pytest.fixture
    def fake_solver(self, monkeypatch: pytest.MonkeyPatch) -> list[float]:
        seen: list[float] = []

        def solve_volume(
            body: object,
            v: float,
            settings: SolverSettings,
            constants: SolverConstants,
            dim: int,
        ) -> SolveReport:
            seen.append(v)
            if v == 16.0:
                raise InfeasibleVolumeError("window too small", free_volume=10.0, volume=v)
            return fake_report(v, dim, 0.9 * profile_free(v, dim), seed=settings.seed)

        monkeypatch.setattr(scan_module, "solve_volume", solve_volume)
        return seen

    def test_rows_in_ladder_order(self, fake_solver: list[float], lower_half_plane: HalfSpace) -> None:
        table = scan(lower_half_plane, [1.0, 4.0, 16.0, 64.0], workers=2, dstar=1)
        assert sorted(fake_solver) == [1.0, 4.0, 16.0, 64.0]
        assert [row.v for row in table.rows] == [1.0, 4.0, 16.0, 64.0]
        assert table.dim == 2
        assert table.dstar == 1
        assert table.settings is not None and table.constants is not None
        assert table.constants.dim == 2

    def test_failed_row_is_kept(self, fake_solver: list[float], lower_half_plane: HalfSpace) -> None:
        table = scan(lower_half_plane, [1.0, 4.0, 16.0, 64.0], workers=1)
        failed = table.rows[2]
        assert failed.error is not None and "window too small" in failed.error
        assert not failed.usable
        assert failed.perimeter is None
        for row in (table.rows[0], table.rows[1], table.rows[3]):
            assert row.usable
            assert row.residue == pytest.approx(0.1 * profile_free(row.v, 2))

    def test_free_space_needs_dim(self, fake_solver: list[float]) -> None:
        with pytest.raises(IsoresInputError):
            scan(None, [1.0, 2.0])
        table = scan(None, [1.0, 2.0], dim=3)
        assert table.dim == 3

    def test_settings_are_passed(self, fake_solver: list[float]) -> None:
        settings = SolverSettings(method=SolveMethod.ANNEAL, seed=7)
        table = scan(None, [1.0], settings, dim=2)
        assert table.rows[0].seed == 7
        assert table.settings == settings

    @pytest.mark.parametrize("volumes", [[], [1.0, 1.0], [2.0, 1.0], [-1.0, 1.0]])
    def test_rejects_volumes(self, fake_solver: list[float], volumes: list[float]) -> None:
        with pytest.raises(IsoresInputError):
            scan(None, volumes, dim=2)
        assert fake_solver == []

    def test_unexpected_errors_propagate(self, monkeypatch: pytest.MonkeyPatch) -> None:
        def broken(*args: object) -> SolveReport:
            raise RuntimeError("boom")

        monkeypatch.setattr(scan_module, "solve_volume", broken)
        with pytest.raises(RuntimeError, match="boom"):
            scan(None, [1.0], dim=2)


class TestCalibration:
    @pytest.fixture
    def biased_solver(self, monkeypatch: pytest.MonkeyPatch) -> list[tuple[bool, float]]:
        """Free space comes out ``1 + 0.02 / v`` too long; bodies carry the same bias on top of ``0.9 I_free``."""
        calls: list[tuple[bool, float]] = []

        def solve_volume(
            body: object,
            v: float,
            settings: SolverSettings,
            constants: SolverConstants,
            dim: int,
        ) -> SolveReport:
            calls.append((body is None, v))
            bias = 1.0 + 0.02 / v
            if body is None:
                return fake_report(v, dim, bias * profile_free(v, dim), deficit=bias - 1.0)
            return fake_report(v, dim, 0.9 * bias * profile_free(v, dim))

        monkeypatch.setattr(scan_module, "solve_volume", solve_volume)
        return calls

    def test_one_free_solve_without_pitch(
        self, biased_solver: list[tuple[bool, float]], lower_half_plane: HalfSpace
    ) -> None:
        table = scan(lower_half_plane, [1.0, 4.0, 16.0], calibrate=True, workers=1)
        assert [v for free, v in biased_solver if free] == [1.0]
        calibration = table.calibration
        assert calibration is not None and calibration.scale_invariant
        assert calibration.ratios == [pytest.approx(1.02)]
        row = table.rows[1]
        assert row.perimeter_ratio == pytest.approx(1.02)
        assert row.raw_perimeter == pytest.approx(0.9 * 1.005 * profile_free(4.0, 2))
        assert row.perimeter == pytest.approx(row.raw_perimeter / 1.02)
        assert row.residue == pytest.approx(profile_free(4.0, 2) - row.perimeter)

    def test_fixed_pitch_calibrates_every_volume(
        self, biased_solver: list[tuple[bool, float]], lower_half_plane: HalfSpace
    ) -> None:
        volumes = [1.0, 4.0, 16.0]
        table = scan(lower_half_plane, volumes, SolverSettings(pitch=0.1), calibrate=True, workers=1)
        assert sorted(v for free, v in biased_solver if free) == volumes
        assert table.calibration is not None and not table.calibration.scale_invariant
        for row in table.rows:
            assert row.perimeter == pytest.approx(0.9 * profile_free(row.v, 2))
            assert row.residue == pytest.approx(0.1 * profile_free(row.v, 2))
            # fake bodies report deficit 0.02
            assert row.deficit == pytest.approx(1.02 / (1.0 + 0.02 / row.v) - 1.0)

    def test_uncalibrated_rows_are_raw(self, biased_solver: list[tuple[bool, float]]) -> None:
        table = scan(None, [1.0, 4.0], dim=2)
        assert table.calibration is None
        assert all(free for free, _ in biased_solver)
        for row in table.rows:
            assert row.perimeter_ratio is None and row.raw_perimeter is None
            assert row.perimeter == pytest.approx((1.0 + 0.02 / row.v) * profile_free(row.v, 2))

    def test_given_calibration_skips_free_solves(
        self, biased_solver: list[tuple[bool, float]], lower_half_plane: HalfSpace
    ) -> None:
        given = GridCalibration(dim=2, volumes=[1.0], ratios=[1.5], scale_invariant=True)
        table = scan(lower_half_plane, [4.0], calibration=given)
        assert biased_solver == [(False, 4.0)]
        assert table.calibration == given
        assert table.rows[0].perimeter_ratio == 1.5

    def test_failed_free_solve(self, monkeypatch: pytest.MonkeyPatch, lower_half_plane: HalfSpace) -> None:
        def solve_volume(body: object, v: float, *args: object) -> SolveReport:
            raise InfeasibleVolumeError("window too small", free_volume=0.5, volume=v)

        monkeypatch.setattr(scan_module, "solve_volume", solve_volume)
        with pytest.raises(SolverError, match="calibration failed at v=1"):
            grid_calibration([1.0, 2.0], dim=2)

    def test_ratio_interpolates_in_log_volume(self) -> None:
        calibration = GridCalibration(dim=3, volumes=[1.0, 100.0], ratios=[1.0, 1.1])
        assert calibration.ratio_at(10.0) == pytest.approx(1.05)
        assert calibration.ratio_at(1e4) == pytest.approx(1.1)
        assert calibration.ratio_at(0.1) == pytest.approx(1.0)

    @pytest.mark.parametrize(("volumes", "ratios"), [([1.0, 2.0], [1.0]), ([1.0], [0.0]), ([], [])])
    def test_rejects_bad_calibration(self, volumes: list[float], ratios: list[float]) -> None:
        with pytest.raises(ValidationError):
            GridCalibration(dim=2, volumes=volumes, ratios=ratios)

    def test_row_from_report_with_ratio(self) -> None:
        report = fake_report(8.0, 3, 10.0)
        row = row_from_report(8.0, report, ratio=1.25)
        assert row.perimeter == pytest.approx(8.0)
        assert row.raw_perimeter == 10.0
        assert row.residue == pytest.approx(profile_free(8.0, 3) - 8.0)
        assert row.deficit == pytest.approx(1.02 / 1.25 - 1.0)


class TestConstructionTable:
    def test_rows(self, square_cylinder: CylinderBody) -> None:
        table = construction_table(square_cylinder, [1e2, 1e3], pitch=0.05)
        assert table.dstar == 1
        assert len(table.rows) == 2
        assert all(row.source is ProfileSource.CONSTRUCTION for row in table.rows)
        for row in table.rows:
            assert row.perimeter is not None and row.residue is not None
            assert row.residue == pytest.approx(residue(row.v, row.perimeter, 3))
        assert table.rows[1].residue > table.rows[0].residue > 0

    @pytest.mark.parametrize("radii", [[], [10.0, 10.0], [100.0, 10.0]])
    def test_rejects_radii(self, square_cylinder: CylinderBody, radii: list[float]) -> None:
        with pytest.raises(IsoresInputError):
            construction_table(square_cylinder, radii)
