import importlib
import json
from collections.abc import Sequence
from pathlib import Path

import pytest

from isores.cli import main, parse_cli
from isores.cli.output import TABLE_COLUMNS, emit_json
from isores.geometry.bodies import ConvexBody
from isores.models.enums import Command, RigidityVerdict, SolveMethod, Verdict
from isores.models.reports import ProfileTable
from isores.models.run import ReportBundle
from isores.profiles.closed_form import profile_free, profile_halfspace

from ..helpers import residue_table

cli_module = importlib.import_module("isores.cli.main")

LADDER = "1,4,16,64,256,1024"


def _bundle(text: str) -> ReportBundle:
    return ReportBundle.model_validate_json(text)


class TestParse:
    def test_solve(self) -> None:
        config = parse_cli(["solve", "--dim", "2", "--volume", "3.5", "--method", "anneal", "--seed", "4"])
        assert config.command is Command.SOLVE
        assert config.volume == 3.5
        assert config.method is SolveMethod.ANNEAL
        assert config.seed == 4
        assert not config.render

    def test_lists(self) -> None:
        config = parse_cli(["scan", "--dim", "3", "--volumes", "1,4,16", "--cells-per-length", "20"])
        assert config.volumes == [1.0, 4.0, 16.0]
        assert config.cells_per_length == 20

    @pytest.mark.parametrize(
        "argv",
        [
            ["solve", "--dim", "2"],
            ["solve", "--dim", "2", "--volume", "abc"],
            ["scan", "--dim", "2", "--volumes", "4,1"],
            ["scan", "--dim", "2", "--volumes", "1,x"],
            ["solve", "--dim", "2", "--volume", "1", "--method", "newton"],
            ["dstar"],
            ["frobnicate"],
        ],
    )
    def test_usage_errors_exit_2(self, argv: list[str]) -> None:
        with pytest.raises(SystemExit) as exc:
            parse_cli(argv)
        assert exc.value.code == 2

    def test_missing_body_file(self, tmp_path: Path) -> None:
        with pytest.raises(SystemExit) as exc:
            parse_cli(["dstar", "--body", str(tmp_path / "missing.json")])
        assert exc.value.code == 2

    def test_malformed_body_file(self, tmp_path: Path) -> None:
        path = tmp_path / "bad.json"
        path.write_text('{"kind": "hpoly", "dim": 2, "A": [[1, 0]]}', encoding="utf-8")
        with pytest.raises(SystemExit) as exc:
            parse_cli(["dstar", "--body", str(path)])
        assert exc.value.code == 2


class TestCommands:
    def test_profile_csv(self, capsys: pytest.CaptureFixture[str]) -> None:
        assert main(["profile", "--dim", "2", "--volumes", "1,4"]) == 0
        lines = capsys.readouterr().out.splitlines()
        assert lines[0] == "v,I_free,I_halfspace,source"
        assert len(lines) == 3
        v, free, half, source = lines[2].split(",")
        assert float(v) == 4.0
        assert float(free) == pytest.approx(profile_free(4.0, 2))
        assert float(half) == pytest.approx(profile_halfspace(4.0, 2))
        assert source == "closed_form"

    def test_dstar(self, slab_file: Path, capsys: pytest.CaptureFixture[str]) -> None:
        assert main(["dstar", "--body", str(slab_file)]) == 0
        bundle = _bundle(capsys.readouterr().out)
        assert bundle.command is Command.DSTAR
        assert bundle.dstar is not None
        assert bundle.dstar.dstar == 2

    def test_recession(self, cylinder_file: Path, capsys: pytest.CaptureFixture[str]) -> None:
        assert main(["recession", "--body", str(cylinder_file)]) == 0
        bundle = _bundle(capsys.readouterr().out)
        assert bundle.recession is not None
        assert bundle.recession.span_dim == 1
        assert len(bundle.recession.lineality) == 1

    def test_dimension_contradiction(self, slab_file: Path, capsys: pytest.CaptureFixture[str]) -> None:
        assert main(["solve", "--body", str(slab_file), "--dim", "2", "--volume", "1"]) == 2
        assert "contradicts" in capsys.readouterr().err

    def test_solve_render_and_replay(self, tmp_path: Path) -> None:
        out = tmp_path / "solve"
        argv = ["solve", "--dim", "2", "--volume", "1", "--method", "anneal", "--cells-per-length", "12"]
        assert main([*argv, "-o", str(out), "--render"]) == 0
        report = out / "report.json"
        bundle = _bundle(report.read_text(encoding="utf-8"))
        assert bundle.solve is not None
        assert bundle.solve.minimizer is not None
        assert bundle.timings == {}
        pgm = (out / "slice.pgm").read_bytes()
        assert pgm.startswith(b"P5\n")
        width, height = bundle.solve.minimizer.shape
        assert len(pgm) == len(f"P5\n{width} {height}\n255\n") + width * height

        replay = tmp_path / "replay"
        assert main(["render", "--report", str(report), "-o", str(replay)]) == 0
        assert (replay / "slice.pgm").read_bytes() == pgm

    def test_solve_is_repeatable(self, tmp_path: Path) -> None:
        argv = ["solve", "--dim", "2", "--volume", "1", "--method", "anneal", "--cells-per-length", "10"]
        report = tmp_path / "report.json"
        assert main([*argv, "-o", str(tmp_path)]) == 0
        first = report.read_bytes()
        assert main([*argv, "-o", str(tmp_path)]) == 0
        assert report.read_bytes() == first

    def test_render_without_minimizer(self, tmp_path: Path, capsys: pytest.CaptureFixture[str]) -> None:
        path = tmp_path / "empty.json"
        emit_json(ReportBundle(version="0.1.0", command=Command.SOLVE), path)
        assert main(["render", "--report", str(path), "-o", str(tmp_path / "out")]) == 2


class TestScanAndFit:
    @pytest.fixture
    def fake_scan(self, monkeypatch: pytest.MonkeyPatch) -> None:
        def scan(body: ConvexBody | None, volumes: Sequence[float], *args: object, **kwargs: object) -> ProfileTable:
            return residue_table(2, 0, list(volumes), -0.1, prefactor=0.05)

        monkeypatch.setattr(cli_module, "scan", scan)

    def test_scan_writes_files(self, fake_scan: None, tmp_path: Path) -> None:
        assert main(["scan", "--dim", "2", "--volumes", LADDER, "-o", str(tmp_path)]) == 0
        bundle = _bundle((tmp_path / "report.json").read_text(encoding="utf-8"))
        assert bundle.table is not None and len(bundle.table.rows) == 6
        assert bundle.fit is not None
        assert bundle.fit.dstar == 0
        assert bundle.fit.verdict is Verdict.INCONSISTENT
        assert bundle.rigidity is not None
        assert bundle.rigidity.regime is RigidityVerdict.FREE_PROFILE
        assert bundle.statistics is not None

        header = (tmp_path / "table.csv").read_text(encoding="utf-8").splitlines()[0]
        assert header == ",".join(TABLE_COLUMNS)
        svg = (tmp_path / "loglog.svg").read_text(encoding="utf-8")
        for gid in ("residue-points", "fit", "reference-lower", "reference-upper"):
            assert f'id="{gid}"' in svg

    def test_scan_calibrate_flag(self, monkeypatch: pytest.MonkeyPatch, tmp_path: Path) -> None:
        flags: list[object] = []

        def scan(body: ConvexBody | None, volumes: Sequence[float], *args: object, **kwargs: object) -> ProfileTable:
            flags.append(kwargs.get("calibrate"))
            return residue_table(2, 0, list(volumes), -0.1, prefactor=0.05)

        monkeypatch.setattr(cli_module, "scan", scan)
        assert parse_cli(["scan", "--dim", "2", "--volumes", LADDER, "--calibrate"]).calibrate
        assert main(["scan", "--dim", "2", "--volumes", LADDER, "--calibrate", "-o", str(tmp_path / "a")]) == 0
        assert main(["scan", "--dim", "2", "--volumes", LADDER, "-o", str(tmp_path / "b")]) == 0
        assert flags == [True, False]

    def test_fit_from_stored_table(self, tmp_path: Path) -> None:
        stored = tmp_path / "stored.json"
        table = residue_table(3, 1, [4.0**i for i in range(6)], 0.25)
        emit_json(ReportBundle(version="0.1.0", command=Command.SCAN, table=table), stored)
        out = tmp_path / "fit"
        assert main(["fit", "--table", str(stored), "-o", str(out)]) == 0
        bundle = _bundle((out / "report.json").read_text(encoding="utf-8"))
        assert bundle.fit is not None
        assert bundle.fit.slope == pytest.approx(0.25)
        assert bundle.fit.verdict is Verdict.CONSISTENT
        assert (out / "loglog.svg").is_file()

    def test_fit_needs_dstar(self, tmp_path: Path) -> None:
        stored = tmp_path / "stored.json"
        table = residue_table(3, 1, [1.0, 4.0], 0.25).model_copy(update={"dstar": None})
        emit_json(ReportBundle(version="0.1.0", command=Command.SCAN, table=table), stored)
        assert main(["fit", "--table", str(stored)]) == 2
        assert main(["fit", "--table", str(stored), "--dstar", "1", "-o", str(tmp_path / "out")]) == 0

    def test_csv_is_repeatable(self, fake_scan: None, tmp_path: Path) -> None:
        for name in ("a", "b"):
            assert main(["scan", "--dim", "2", "--volumes", LADDER, "--dstar", "0", "-o", str(tmp_path / name)]) == 0
        first = (tmp_path / "a" / "table.csv").read_bytes()
        assert first == (tmp_path / "b" / "table.csv").read_bytes()
        assert (tmp_path / "a" / "loglog.svg").read_bytes() == (tmp_path / "b" / "loglog.svg").read_bytes()


def test_report_json_is_indented(slab_file: Path, capsys: pytest.CaptureFixture[str]) -> None:
    main(["recession", "--body", str(slab_file)])
    text = capsys.readouterr().out
    assert json.loads(text)["command"] == "recession"
    assert text.startswith("{\n  ")
