import math

import pytest

from isores.errors.exceptions import IsoresInputError
from isores.models.enums import Verdict
from isores.models.reports import ProfileRow, ProfileTable
from isores.residue.fitting import fit_power_law, fit_scaling, ladder_statistics, scaling_window

from ..helpers import residue_table

VOLUMES = [4.0**i for i in range(6)]


class TestPowerLaw:
    def test_exact_fit(self) -> None:
        xs = [1.0, 2.0, 4.0, 8.0]
        fit = fit_power_law(xs, [3.0 * x**-0.5 for x in xs])
        assert fit.exponent == pytest.approx(-0.5)
        assert fit.prefactor == pytest.approx(3.0)
        assert fit.r2 == pytest.approx(1.0)
        assert fit.n_points == 4

    @pytest.mark.parametrize(
        ("x", "y"),
        [
            ([1.0], [1.0]),
            ([1.0, 2.0], [1.0]),
            ([1.0, 2.0], [1.0, -1.0]),
            ([0.0, 2.0], [1.0, 1.0]),
            ([2.0, 2.0], [1.0, 3.0]),
        ],
    )
    def test_rejects(self, x: list[float], y: list[float]) -> None:
        with pytest.raises(IsoresInputError):
            fit_power_law(x, y)


class TestScalingFit:
    def test_window(self) -> None:
        low, high = scaling_window(1, 3)
        assert low == pytest.approx(1 / 6 - 0.06)
        assert high == pytest.approx(1 / 3 + 0.06)

    def test_consistent(self) -> None:
        fit = fit_scaling(residue_table(3, 1, VOLUMES, 0.25))
        assert fit.verdict is Verdict.CONSISTENT
        assert fit.slope == pytest.approx(0.25)
        assert fit.intercept == pytest.approx(math.log(0.5))
        assert fit.n_points == 6
        assert fit.decades == pytest.approx(5 * math.log10(4))
        assert fit.message is None
        assert len(fit.log_v) == len(fit.log_residue) == 6

    def test_inconsistent(self) -> None:
        fit = fit_scaling(residue_table(3, 1, VOLUMES, 0.6))
        assert fit.verdict is Verdict.INCONSISTENT
        assert fit.message is not None and "outside" in fit.message

    def test_too_few_points(self) -> None:
        fit = fit_scaling(residue_table(3, 1, VOLUMES[:3], 0.25))
        assert fit.verdict is Verdict.INCONCLUSIVE
        assert fit.slope == pytest.approx(0.25)

    def test_too_few_decades(self) -> None:
        fit = fit_scaling(residue_table(3, 1, [1.0, 1.2, 1.4, 1.6, 1.8, 2.0], 0.25))
        assert fit.verdict is Verdict.INCONCLUSIVE
        assert fit.message is not None

    def test_skips_unusable_rows(self) -> None:
        table = residue_table(3, 1, VOLUMES, 0.25)
        rows = list(table.rows)
        rows.append(ProfileRow(v=1e4, error="window infeasible"))
        rows.append(ProfileRow(v=1e5, perimeter=1.0, residue=-0.5, negative_residue=True))
        fit = fit_scaling(ProfileTable(dim=3, dstar=1, rows=rows))
        assert fit.n_points == 6
        assert fit.verdict is Verdict.CONSISTENT

    def test_dstar_argument_overrides_table(self) -> None:
        fit = fit_scaling(residue_table(3, 1, VOLUMES, 0.25).model_copy(update={"dstar": None}), dstar=2)
        assert fit.dstar == 2
        assert fit.window_low == pytest.approx(1 / 3 - 0.06)

    def test_needs_dstar(self) -> None:
        with pytest.raises(IsoresInputError):
            fit_scaling(residue_table(3, 1, VOLUMES, 0.25).model_copy(update={"dstar": None}))

    def test_empty_table(self) -> None:
        fit = fit_scaling(ProfileTable(dim=2, dstar=0))
        assert fit.verdict is Verdict.INCONCLUSIVE
        assert fit.slope is None
        assert fit.decades == 0.0


class TestLadderStatistics:
    @pytest.fixture
    def table(self) -> ProfileTable:
        rows = [
            ProfileRow(
                v=v,
                perimeter=5.0 * v ** (2 / 3),
                residue=v**0.25,
                components=2 if i == 0 else 1,
                diameter=2.0 * v ** (1 / 3),
                deficit=0.4 * v**-0.5,
                asymmetry=0.1 * v**-0.25,
                hd_norm=0.5 * v**-0.2,
                perimeter_obstacle=3.0 * v ** (1 / 3),
            )
            for i, v in enumerate(VOLUMES)
        ]
        return ProfileTable(dim=3, dstar=1, rows=rows)

    def test_trends(self, table: ProfileTable) -> None:
        stats = ladder_statistics(table)
        assert stats.deficit_fit is not None
        assert stats.deficit_fit.exponent == pytest.approx(-0.5)
        assert stats.deficit_exponent_ok is True
        assert stats.obstacle_fit is not None
        assert stats.obstacle_fit.exponent == pytest.approx(1 / 3)
        assert stats.hausdorff_fit is not None
        assert stats.hausdorff_fit.exponent == pytest.approx(-0.2)
        assert stats.hausdorff_nonincreasing is True
        assert stats.diameter_constant == pytest.approx(2.0)
        assert stats.v0 == VOLUMES[1]
        assert all(stats.asymmetry_ok)
        assert len(stats.asymmetry_ok) == len(VOLUMES)

    def test_slow_deficit_decay_is_flagged(self, table: ProfileTable) -> None:
        rows = [row.model_copy(update={"deficit": 0.4 * row.v**0.1}) for row in table.rows]
        stats = ladder_statistics(ProfileTable(dim=3, dstar=1, rows=rows))
        assert stats.deficit_exponent_ok is False

    def test_no_connected_tail(self, table: ProfileTable) -> None:
        rows = list(table.rows)
        rows[-1] = rows[-1].model_copy(update={"components": 3})
        stats = ladder_statistics(ProfileTable(dim=3, dstar=1, rows=rows))
        assert stats.v0 is None

    def test_sparse_table(self) -> None:
        stats = ladder_statistics(ProfileTable(dim=2, dstar=0, rows=[ProfileRow(v=1.0, perimeter=4.0)]))
        assert stats.deficit_fit is None
        assert stats.hausdorff_nonincreasing is None
        assert stats.diameter_constant is None
        assert stats.v0 is None

    def test_needs_dstar(self) -> None:
        with pytest.raises(IsoresInputError):
            ladder_statistics(ProfileTable(dim=2))
