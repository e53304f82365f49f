"""
Geometry core: point grids, bounding boxes, unit-cube normalization and
UV-origin canonicalization.
"""

from .grids import (
    COORD_BINS,
    GRID_SIZE,
    Aabb,
    EdgeGrid,
    FaceGrid,
    compute_aabb,
    dequantize_box,
    dequantize_coord,
    quantize_box,
    quantize_coord,
)
from .canonical import (
    CanonicalGrid,
    UnitCubeTransform,
    canonicalize,
    canonicalize_edge,
    canonicalize_edge_direction,
    canonicalize_face,
    canonicalize_uv_origin,
    denormalize,
    denormalize_points,
    normalize_unit_cube,
)
from .transforms import jitter_domain_box, rotate_points, rotation_matrix

__all__ = [
    "COORD_BINS",
    "GRID_SIZE",
    "Aabb",
    "EdgeGrid",
    "FaceGrid",
    "compute_aabb",
    "dequantize_box",
    "dequantize_coord",
    "quantize_box",
    "quantize_coord",
    "CanonicalGrid",
    "UnitCubeTransform",
    "canonicalize",
    "canonicalize_edge",
    "canonicalize_edge_direction",
    "canonicalize_face",
    "canonicalize_uv_origin",
    "denormalize",
    "denormalize_points",
    "normalize_unit_cube",
    "jitter_domain_box",
    "rotate_points",
    "rotation_matrix",
]
