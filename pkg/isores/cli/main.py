"""``isores`` command line.

Exit codes: 0 on success, 1 on runtime or IO failures, 2 on usage errors
(bad flags, invalid numbers, missing or malformed body files).
"""

from __future__ import annotations

import argparse
import logging
import sys
import time
from collections.abc import Iterator, Sequence
from contextlib import contextmanager
from dataclasses import replace
from pathlib import Path

from pydantic import ValidationError

from .._version import __version__
from ..asymdim.oracle import ScalingSchedule
from ..asymdim.report import dstar_report, polyhedral_form, recession_report
from ..config.settings import get_settings
from ..errors.exceptions import IsoresError, IsoresInputError, NoStableLimitError
from ..geometry.bodies import ConvexBody, CylinderBody
from ..geometry.loader import load_body, parse_body
from ..gridsolver.domain import decode_classes
from ..gridsolver.solver import solve_volume
from ..models.bodies import BodyDescription, FreeDescription
from ..models.enums import Command, SolveMethod
from ..models.reports import ProfileTable, SolverConstants
from ..models.run import ReportBundle, RunConfig
from ..residue.fitting import fit_scaling, ladder_statistics
from ..residue.rigidity import rigidity_verdict
from ..residue.sandwich import cylinder_sandwich
from ..residue.scan import construction_table, scan
from .output import bundle_json, emit_csv, emit_json, emit_profile_csv, read_bundle, render_loglog, render_slice

logger = logging.getLogger("isores")


def _floats(text: str) -> list[float]:
    try:
        return [float(part) for part in text.split(",") if part.strip()]
    except ValueError as e:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from e


def _ints(text: str) -> list[int]:
    try:
        return [int(part) for part in text.split(",") if part.strip()]
    except ValueError as e:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from e


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("-v", "--verbose", action="store_true", help="debug logging")
    common.add_argument("--threads", type=int, help="worker cap (default: ISORES_THREADS)")
    common.add_argument("-o", "--output", type=Path, help="output directory (default: JSON to stdout)")
    common.add_argument("--timings", action="store_true", help="record wall-clock timings in the report")
    common.add_argument("--seed", type=int, help="random seed")

    grid = argparse.ArgumentParser(add_help=False)
    grid.add_argument("--window", type=float, help="window multiple R (default R0)")
    grid.add_argument("--pitch", type=float, help="grid pitch h")
    grid.add_argument("--cells-per-length", type=int, help="cells per v^(1/N) when no pitch is given")
    grid.add_argument("--method", choices=[m.value for m in SolveMethod], help="solver pipeline")
    grid.add_argument("--envelopment", action="store_true", help="count obstacle slices surrounded by the set")

    parser = argparse.ArgumentParser(prog="isores", description="Exterior isoperimetric profiles of convex obstacles.")
    parser.add_argument("--version", action="version", version=f"isores {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("dstar", parents=[common], help="asymptotic dimension of a body")
    p.add_argument("--body", type=Path)
    p.add_argument("--schedule", type=_floats, help="scales n of the rescaling schedule")
    p.add_argument("--gammas", type=_floats, help="window exponents gamma")

    p = sub.add_parser("recession", parents=[common], help="recession cone and cylinder structure")
    p.add_argument("--body", type=Path)

    p = sub.add_parser("profile", parents=[common], help="closed-form profiles or ball-attachment bounds (CSV)")
    p.add_argument("--body", type=Path)
    p.add_argument("--dim", type=int)
    p.add_argument("--volumes", type=_floats)
    p.add_argument("--construction", action="store_true", help="ball attachment on a cylinder body")
    p.add_argument("--radii", type=_floats)
    p.add_argument("--alpha", type=float, help="cube half-width (default: largest inscribed)")
    p.add_argument("--pitch", type=float, help="quadrature pitch")

    p = sub.add_parser("solve", parents=[common, grid], help="minimize relative perimeter at one volume")
    p.add_argument("--body", type=Path)
    p.add_argument("--dim", type=int)
    p.add_argument("--volume", type=float)
    p.add_argument("--render", action="store_true", help="write PGM slices of the minimizer")
    p.add_argument("--planes", type=_ints, help="z indices of the rendered slices (3D)")

    p = sub.add_parser("scan", parents=[common, grid], help="solve a volume ladder and fit the residue")
    p.add_argument("--body", type=Path)
    p.add_argument("--dim", type=int)
    p.add_argument("--volumes", type=_floats)
    p.add_argument("--dstar", type=int, help="skip the d* computation")
    p.add_argument("--calibrate", action="store_true", help="divide out the free-space grid perimeter bias")
    p.add_argument("--svg", type=Path)

    p = sub.add_parser("fit", parents=[common], help="refit a stored scan")
    p.add_argument("--table", type=Path, help="report JSON holding a profile table")
    p.add_argument("--dstar", type=int)
    p.add_argument("--svg", type=Path)

    p = sub.add_parser("compare", parents=[common, grid], help="compare a body with its enveloping cylinder")
    p.add_argument("--body", type=Path)
    p.add_argument("--volumes", type=_floats)
    p.add_argument("--calibrate", action="store_true", help="divide out the free-space grid perimeter bias")

    p = sub.add_parser("render", parents=[common], help="PGM slices of a stored minimizer")
    p.add_argument("--report", type=Path)
    p.add_argument("--planes", type=_ints)
    return parser


def parse_cli(args: Sequence[str] | None = None) -> RunConfig:
    """Parse and validate *args*; usage errors exit with status 2."""
    parser = build_parser()
    ns = parser.parse_args(args)
    values = {key: value for key, value in vars(ns).items() if value is not None and value is not False}
    values["command"] = ns.command
    try:
        config = RunConfig.model_validate(values)
    except ValidationError as e:
        details = "; ".join(f"{'.'.join(map(str, err['loc'])) or 'config'}: {err['msg']}" for err in e.errors())
        parser.error(details)
    for path in (config.body, config.table, config.report):
        if path is not None and not path.is_file():
            parser.error(f"no such file: {path}")
    if config.body is not None:
        try:
            parse_body(config.body.read_text(encoding="utf-8"))
        except (IsoresInputError, OSError) as e:
            parser.error(f"{config.body}: {e}")
    return config


class _Stopwatch:
    def __init__(self, enabled: bool) -> None:
        self.enabled = enabled
        self.timings: dict[str, float] = {}

    @contextmanager
    def stage(self, name: str) -> Iterator[None]:
        start = time.perf_counter()
        try:
            yield
        finally:
            if self.enabled:
                self.timings[name] = round(time.perf_counter() - start, 6)


def _body(config: RunConfig) -> tuple[BodyDescription, ConvexBody | None, int]:
    if config.body is None:
        assert config.dim is not None
        return FreeDescription(dim=config.dim), None, config.dim
    desc, body = load_body(config.body)
    if config.dim is not None and config.dim != desc.dim:
        raise IsoresInputError(f"--dim {config.dim} contradicts the body dimension {desc.dim}", field="dim")
    return desc, body, desc.dim


def _constants(config: RunConfig, dim: int) -> SolverConstants:
    return config.constants if config.constants is not None else SolverConstants.for_dim(dim)


def _output(config: RunConfig, name: str) -> Path | None:
    if config.output is None:
        return None
    config.output.mkdir(parents=True, exist_ok=True)
    return config.output / name


def _dstar_of(body: ConvexBody | None, config: RunConfig, workers: int) -> int | None:
    if config.dstar is not None:
        return config.dstar
    if body is None:
        return 0
    try:
        return dstar_report(body, workers=workers).dstar
    except NoStableLimitError as e:
        logger.warning("d* unavailable, skipping fits: %s", e)
        return None


def _write_slices(classes_source: ReportBundle, config: RunConfig) -> list[Path]:
    solve = classes_source.solve
    if solve is None or solve.minimizer is None:
        raise IsoresInputError("The report holds no stored minimizer", field="report")
    classes = decode_classes(solve.minimizer)
    planes: list[int | None] = list(config.planes) if config.planes else [None]
    written = []
    for plane in planes:
        suffix = "" if classes.ndim == 2 else f"_z{classes.shape[2] // 2 if plane is None else plane:03d}"
        path = _output(config, f"slice{suffix}.pgm") or Path(f"slice{suffix}.pgm")
        path.write_bytes(render_slice(classes, plane))
        written.append(path)
    return written


def run(config: RunConfig) -> ReportBundle | None:
    """Execute one validated command. Returns the report bundle, or ``None`` for commands that only write files."""
    workers = config.threads or get_settings().threads
    watch = _Stopwatch(config.timings)
    bundle = ReportBundle(version=__version__, command=config.command, config=config)

    match config.command:
        case Command.DSTAR:
            _, body, _ = _body(config)
            if body is None:
                raise IsoresInputError("d* needs an obstacle body", field="body")
            schedule = None
            if config.schedule or config.gammas:
                defaults = ScalingSchedule()
                schedule = replace(
                    defaults,
                    ns=tuple(config.schedule) or defaults.ns,
                    gammas=tuple(config.gammas) or defaults.gammas,
                )
            with watch.stage("dstar"):
                bundle.dstar = dstar_report(body, schedule=schedule, workers=workers)

        case Command.RECESSION:
            _, body, _ = _body(config)
            poly = polyhedral_form(body) if body is not None else None
            if poly is None:
                raise IsoresInputError("Recession reports need a polyhedral body", field="body")
            with watch.stage("recession"):
                bundle.recession = recession_report(poly)

        case Command.PROFILE:
            desc, body, dim = _body(config)
            if not config.construction:
                path = _output(config, "profile.csv")
                emit_profile_csv(config.volumes, dim, path or sys.stdout)
                return None
            if not isinstance(body, CylinderBody):
                raise IsoresInputError("--construction needs a cylinder body", field="body")
            with watch.stage("construction"):
                table = construction_table(
                    body, config.radii, pitch=config.pitch, alpha=config.alpha, description=desc, workers=workers
                )
            bundle.table = table
            bundle.fit = fit_scaling(table)
            emit_csv(table, _output(config, "profile.csv") or sys.stdout)
            if config.output is None:
                return None

        case Command.SOLVE:
            _, body, dim = _body(config)
            assert config.volume is not None
            with watch.stage("solve"):
                bundle.solve = solve_volume(
                    body, config.volume, config.solver_settings(), _constants(config, dim), dim=dim
                )
            if config.render:
                for path in _write_slices(bundle, config):
                    logger.info("Wrote %s", path)

        case Command.SCAN:
            desc, body, dim = _body(config)
            with watch.stage("dstar"):
                dstar = _dstar_of(body, config, workers)
            with watch.stage("scan"):
                table = scan(
                    body,
                    config.volumes,
                    config.solver_settings(),
                    _constants(config, dim),
                    dim=dim,
                    description=desc,
                    dstar=dstar,
                    workers=workers,
                    calibrate=config.calibrate,
                )
            _attach_fits(bundle, table, dstar, config)

        case Command.FIT:
            assert config.table is not None
            stored = read_bundle(config.table)
            table = stored.table or (stored.sandwich.body_table if stored.sandwich else None)
            if table is None:
                raise IsoresInputError(f"{config.table} holds no profile table", field="table")
            dstar = config.dstar if config.dstar is not None else table.dstar
            if dstar is None:
                raise IsoresInputError("The table has no d*; pass --dstar", field="dstar")
            _attach_fits(bundle, table, dstar, config)

        case Command.COMPARE:
            desc, body, dim = _body(config)
            poly = polyhedral_form(body) if body is not None else None
            if poly is None:
                raise IsoresInputError("Cylinder comparison needs a polyhedral body", field="body")
            with watch.stage("compare"):
                bundle.sandwich = cylinder_sandwich(
                    poly,
                    config.volumes,
                    config.solver_settings(),
                    _constants(config, dim),
                    description=desc,
                    workers=workers,
                    calibrate=config.calibrate,
                )

        case Command.RENDER:
            assert config.report is not None
            for path in _write_slices(read_bundle(config.report), config):
                print(path)
            return None

    bundle.timings = watch.timings
    return bundle


def _attach_fits(bundle: ReportBundle, table: ProfileTable, dstar: int | None, config: RunConfig) -> None:
    bundle.table = table
    csv_path = _output(config, "table.csv")
    if csv_path is not None:
        emit_csv(table, csv_path)
    if dstar is None:
        return
    bundle.fit = fit_scaling(table, dstar)
    bundle.statistics = ladder_statistics(table, dstar)
    bundle.rigidity = rigidity_verdict(table, dstar)
    svg_path = config.svg or _output(config, "loglog.svg")
    if svg_path is not None:
        render_loglog(bundle.fit, svg_path)


def _emit(bundle: ReportBundle, config: RunConfig) -> None:
    path = _output(config, "report.json")
    if path is None:
        sys.stdout.write(bundle_json(bundle))
        return
    emit_json(bundle, path)
    logger.info("Wrote %s", path)


def main(argv: Sequence[str] | None = None) -> int:
    config = parse_cli(argv)
    logging.basicConfig(
        level=logging.DEBUG if config.verbose else logging.WARNING,
        format="%(asctime)s %(levelname)s %(name)s: %(message)s",
        stream=sys.stderr,
    )
    try:
        bundle = run(config)
        if bundle is not None:
            _emit(bundle, config)
    except IsoresInputError as e:
        print(f"isores: error: {e}", file=sys.stderr)
        return 2
    except (IsoresError, OSError) as e:
        print(f"isores: {type(e).__name__}: {e}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
