from __future__ import annotations

import logging
import math

from scipy.special import gamma

from ..config.constants import MAX_DIMENSION, MIN_DIMENSION
from ..errors.exceptions import IsoresInputError

logger = logging.getLogger("isores")


def unit_ball_volume(dim: int) -> float:
    """``omega_N = pi^(N/2) / Gamma(N/2 + 1)``."""
    if not MIN_DIMENSION <= dim <= MAX_DIMENSION:
        raise IsoresInputError(f"Dimension {dim} outside [{MIN_DIMENSION}, {MAX_DIMENSION}]", field="dim")
    return float(math.pi ** (dim / 2) / gamma(dim / 2 + 1))


def _check_volume(v: float) -> None:
    if not v > 0 or not math.isfinite(v):
        raise IsoresInputError(f"Volume must be positive and finite, got {v}", field="v")


def profile_free(v: float, dim: int) -> float:
    """Isoperimetric profile of ``R^N``: ``N omega_N^(1/N) v^((N-1)/N)``."""
    _check_volume(v)
    omega = unit_ball_volume(dim)
    return dim * omega ** (1 / dim) * v ** ((dim - 1) / dim)


def profile_halfspace(v: float, dim: int) -> float:
    """Relative profile outside a half-space: ``N (omega_N / 2)^(1/N) v^((N-1)/N)``."""
    _check_volume(v)
    omega = unit_ball_volume(dim)
    return dim * (omega / 2) ** (1 / dim) * v ** ((dim - 1) / dim)


def residue(v: float, perimeter: float, dim: int) -> float:
    """Gap ``profile_free(v) - I``; negative values mean the estimate is worse than a free ball."""
    value = profile_free(v, dim) - perimeter
    if value < 0:
        logger.warning("Negative residue %.4g at v=%.4g (I=%.4g above the free profile)", value, v, perimeter)
    return value


def ball_radius(v: float, dim: int) -> float:
    """Radius of the ball of volume *v*."""
    _check_volume(v)
    return float((v / unit_ball_volume(dim)) ** (1 / dim))


def halfball_radius(v: float, dim: int) -> float:
    """Radius of the half-ball of volume *v*."""
    return ball_radius(2 * v, dim)


def window_floor(dim: int) -> float:
    """Smallest admissible window multiple ``R0 = (2 / omega_N)^(1/N) + 1``."""
    return float((2 / unit_ball_volume(dim)) ** (1 / dim) + 1)


def improved_exponent(dstar: int, dim: int) -> float:
    """Exponent ``(3N + 1) d* / (N (4N - d*))``, drawn as a reference line only."""
    return (3 * dim + 1) * dstar / (dim * (4 * dim - dstar))
