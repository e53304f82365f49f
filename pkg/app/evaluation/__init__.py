"""
Validity checks, constraint detection and generation metrics.
"""

from .surface import SurfaceSample, grid_triangles, point_triangle_distances, sample_surface_points
from .validity import DEFAULT_GAP_TOLERANCE, check_validity
from .constraints import (
    CylinderFit,
    detect_bolt_holes,
    detect_constraints,
    detect_hull_planes,
    fit_cylinder,
)
from .metrics import (
    chamfer_distance,
    compute_cov_mmd_jsd,
    evaluate_sets,
    novel_unique,
    pairwise_chamfer,
    solid_hash,
)

__all__ = [
    "SurfaceSample",
    "grid_triangles",
    "point_triangle_distances",
    "sample_surface_points",
    "DEFAULT_GAP_TOLERANCE",
    "check_validity",
    "CylinderFit",
    "detect_bolt_holes",
    "detect_constraints",
    "detect_hull_planes",
    "fit_cylinder",
    "chamfer_distance",
    "compute_cov_mmd_jsd",
    "evaluate_sets",
    "novel_unique",
    "pairwise_chamfer",
    "solid_hash",
]
