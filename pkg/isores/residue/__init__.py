from .fitting import fit_power_law, fit_scaling, ladder_statistics, scaling_window
from .rigidity import rigidity_check, rigidity_verdict
from .sandwich import cylinder_sandwich
from .scan import construction_table, grid_calibration, ladder, row_from_report, scan

__all__ = [
    "construction_table",
    "cylinder_sandwich",
    "fit_power_law",
    "fit_scaling",
    "grid_calibration",
    "ladder",
    "ladder_statistics",
    "rigidity_check",
    "rigidity_verdict",
    "row_from_report",
    "scaling_window",
    "scan",
]
