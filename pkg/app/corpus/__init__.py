"""
Synthetic B-Rep generators and the labelled corpus built from them.
"""

from .generators import (
    SolidBuilder,
    gen_box,
    gen_cylinder,
    gen_plate_with_holes,
    gen_prism,
    random_hole_layout,
)
from .corpus import MANIFEST_NAME, gen_corpus, load_corpus, random_solid

__all__ = [
    "SolidBuilder",
    "gen_box",
    "gen_cylinder",
    "gen_plate_with_holes",
    "gen_prism",
    "random_hole_layout",
    "MANIFEST_NAME",
    "gen_corpus",
    "load_corpus",
    "random_solid",
]
