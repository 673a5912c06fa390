from __future__ import annotations

from pydantic import Field
from pydantic_settings import BaseSettings

from .constants import (
    DEFAULT_THREADS,
    EXTENT_THRESHOLD,
    MEMBERSHIP_SLACK,
    RANK_REL_TOL,
    SUPPORT_CHECK_TOL,
    UNIT_TOL,
)


class IsoresSettings(BaseSettings):
    """Process-wide settings, loaded from environment variables or passed directly.

    Every field can be set via its ``ISORES_``-prefixed env var
    (e.g. ``ISORES_THREADS``, ``ISORES_MEMBERSHIP_SLACK``).

    :param threads: Max number of solves / schedule entries run concurrently.
    :param membership_slack: Slack added to polyhedral constraints in membership tests.
    :param unit_tol: Tolerance on ``|u| = 1`` for support directions.
    :param support_tol: Tolerance used when cross-checking support functions.
    :param rank_tol: Relative singular value cut-off for numerical rank.
    :param extent_threshold: Minimal extent (inside the unit window) counted as a dimension.
    """

    model_config = {"env_prefix": "ISORES_"}

    threads: int = Field(default=DEFAULT_THREADS, ge=1)
    membership_slack: float = Field(default=MEMBERSHIP_SLACK, ge=0)
    unit_tol: float = Field(default=UNIT_TOL, gt=0)
    support_tol: float = Field(default=SUPPORT_CHECK_TOL, gt=0)
    rank_tol: float = Field(default=RANK_REL_TOL, gt=0)
    extent_threshold: float = Field(default=EXTENT_THRESHOLD, gt=0)


def get_settings() -> IsoresSettings:
    return IsoresSettings()
