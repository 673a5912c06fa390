from .constants import MAX_DIMENSION, MIN_DIMENSION, SOLVER_DIMENSIONS
from .settings import IsoresSettings, get_settings

__all__ = ["MAX_DIMENSION", "MIN_DIMENSION", "SOLVER_DIMENSIONS", "IsoresSettings", "get_settings"]
