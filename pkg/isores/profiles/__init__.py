from .closed_form import (
    ball_radius,
    halfball_radius,
    improved_exponent,
    profile_free,
    profile_halfspace,
    residue,
    unit_ball_volume,
    window_floor,
)
from .construction import Attachment, InscribedCube, ball_attachment, inscribed_cube

__all__ = [
    "Attachment",
    "InscribedCube",
    "ball_attachment",
    "ball_radius",
    "halfball_radius",
    "improved_exponent",
    "inscribed_cube",
    "profile_free",
    "profile_halfspace",
    "residue",
    "unit_ball_volume",
    "window_floor",
]
