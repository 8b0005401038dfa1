"""Recursive and compositional constructions of coloured Kirkman systems.

Every function returns a :class:`~ktscolour.core.System` and runs the
relevant verifiers on it before returning, raising
:class:`ConstructionError` if any of them fails.
"""

from ._certify import ConstructionError
from .coloured import base_frame_2_4, frame_8_4_coloured, rgdd_4_3_coloured, sts_to_kts_pipeline
from .frames import (
    Ingredient,
    align_fill,
    default_ingredients,
    frame_fill_one_point,
    gdd_blowup,
    quadruple_to_4gdd,
    rainbow_frame_construction,
)
from .kq import kq_build, kq_colour_2delta, kq_colour_delta_plus_one
from .triple import td3_classes, td3_resolvable, tripling

__all__ = [
    "ConstructionError", "Ingredient",
    "align_fill", "base_frame_2_4", "default_ingredients", "frame_8_4_coloured", "frame_fill_one_point",
    "gdd_blowup", "kq_build", "kq_colour_2delta", "kq_colour_delta_plus_one", "quadruple_to_4gdd",
    "rainbow_frame_construction", "rgdd_4_3_coloured", "sts_to_kts_pipeline",
    "td3_classes", "td3_resolvable", "tripling",
]
