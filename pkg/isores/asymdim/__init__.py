from .oracle import OracleEstimate, ScalingSchedule, dstar_oracle, find_recession_direction
from .polyhedral import (
    DstarResult,
    RecessionLimitReport,
    StructureDecomposition,
    dstar_polyhedral,
    recession_generators,
    recession_limit_check,
    structure_decompose,
)
from .report import dstar_report, polyhedral_form, recession_report
from .slices import SliceReport, slice_check

__all__ = [
    "DstarResult",
    "OracleEstimate",
    "RecessionLimitReport",
    "ScalingSchedule",
    "SliceReport",
    "StructureDecomposition",
    "dstar_oracle",
    "dstar_polyhedral",
    "dstar_report",
    "find_recession_direction",
    "polyhedral_form",
    "recession_generators",
    "recession_limit_check",
    "recession_report",
    "slice_check",
    "structure_decompose",
]
