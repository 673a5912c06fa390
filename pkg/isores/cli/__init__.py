from .main import main, parse_cli, run
from .output import emit_csv, emit_json, read_bundle, render_loglog, render_slice

__all__ = ["emit_csv", "emit_json", "main", "parse_cli", "read_bundle", "render_loglog", "render_slice", "run"]
