"""
Assembly-interface constraint detection.

Hull planes are faces lying in one of the six planes of the solid's
bounding box. Bolt holes are concave cylindrical faces whose axis lines up
with the normal of an adjacent planar face.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import List, Optional

import numpy as np

from app.schema.reports import ConstraintReport
from app.topology.graph import BRepGraph

logger = logging.getLogger(__name__)

HULL_RELATIVE_TOLERANCE = 1e-6
CYLINDER_FIT_TOLERANCE = 1e-3
STRAIGHTNESS_TOLERANCE = 1e-6


def detect_hull_planes(graph: BRepGraph, tol: Optional[float] = None) -> List[int]:
    """Faces whose every point lies within ``tol`` of one bounding-box plane."""
    if graph.num_faces == 0:
        return []
    box = graph.bounding_box()
    tol = HULL_RELATIVE_TOLERANCE * max(box.diagonal, 1e-12) if tol is None else tol
    hull = []
    for face_id, face in enumerate(graph.faces):
        points = face.grid.points.reshape(-1, 3)
        for axis in range(3):
            values = points[:, axis]
            if (
                np.abs(values - box.min_corner[axis]).max() <= tol
                or np.abs(values - box.max_corner[axis]).max() <= tol
            ):
                hull.append(face_id)
                break
    return hull


@dataclass(frozen=True)
class CylinderFit:
    axis: np.ndarray
    center: np.ndarray
    radius: float


def plane_normal(points: np.ndarray, tol: float) -> Optional[np.ndarray]:
    """Unit normal of the best-fit plane, or None when the points are not planar."""
    flat = points.reshape(-1, 3)
    centered = flat - flat.mean(axis=0)
    _, singular, vt = np.linalg.svd(centered, full_matrices=False)
    scale = max(float(singular[0]), 1e-300)
    if singular[2] / scale > tol or singular[1] / scale <= tol:
        return None
    return vt[2]


def _ruling_axis(lines: np.ndarray, tol: float) -> Optional[np.ndarray]:
    """Common direction of a family of straight, parallel grid lines."""
    directions = []
    for line in lines:
        centered = line - line.mean(axis=0)
        _, singular, vt = np.linalg.svd(centered, full_matrices=False)
        if singular[0] <= 1e-12 or singular[1] / singular[0] > tol:
            return None
        direction = vt[0]
        if directions and np.dot(direction, directions[0]) < 0:
            direction = -direction
        directions.append(direction)
    directions = np.array(directions)
    if np.abs(np.cross(directions, directions[0])).max() > tol:
        return None
    axis = directions.mean(axis=0)
    return axis / np.linalg.norm(axis)


def fit_cylinder(points: np.ndarray, tol: float = CYLINDER_FIT_TOLERANCE) -> Optional[CylinderFit]:
    """Fit a cylinder to a face grid whose u or v lines are its rulings."""
    axis = _ruling_axis(points.transpose(1, 0, 2), STRAIGHTNESS_TOLERANCE)
    if axis is None:
        axis = _ruling_axis(points, STRAIGHTNESS_TOLERANCE)
    if axis is None:
        return None

    helper = np.eye(3)[np.argmin(np.abs(axis))]
    e1 = np.cross(axis, helper)
    e1 /= np.linalg.norm(e1)
    e2 = np.cross(axis, e1)
    flat = points.reshape(-1, 3)
    xy = np.stack([flat @ e1, flat @ e2], axis=1)

    spread = np.linalg.svd(xy - xy.mean(axis=0), compute_uv=False)
    if spread[0] <= 1e-12 or spread[1] / spread[0] < tol:
        return None  # cross-section is a line
    # algebraic circle fit: x^2 + y^2 + D x + E y + F = 0
    design = np.column_stack([xy, np.ones(len(xy))])
    rhs = -(xy ** 2).sum(axis=1)
    (d, e, f), *_ = np.linalg.lstsq(design, rhs, rcond=None)
    center2 = np.array([-d / 2.0, -e / 2.0])
    radius2 = center2 @ center2 - f
    if radius2 <= 0:
        return None
    radius = float(np.sqrt(radius2))
    residual = np.abs(np.linalg.norm(xy - center2, axis=1) - radius).max()
    if residual > tol * radius:
        return None
    center = center2[0] * e1 + center2[1] * e2
    return CylinderFit(axis=axis, center=center, radius=radius)


def _is_concave(points: np.ndarray, orientation_out: bool, fit: CylinderFit) -> bool:
    mid = points.shape[0] // 2
    du = points[mid + 1, mid] - points[mid - 1, mid]
    dv = points[mid, mid + 1] - points[mid, mid - 1]
    normal = np.cross(du, dv)
    if not orientation_out:
        normal = -normal
    offset = points[mid, mid] - fit.center
    radial = offset - np.dot(offset, fit.axis) * fit.axis
    return float(np.dot(normal, radial)) < 0.0


def detect_bolt_holes(graph: BRepGraph, axis_tol_deg: float = 5.0) -> List[int]:
    """Concave cylinders aligned with the normal of an adjacent planar face."""
    if not graph.has_orientation:
        logger.warning("face orientation unknown; skipping bolt-hole detection")
        return []
    cos_tol = np.cos(np.radians(axis_tol_deg))
    normals = {}
    holes = []
    for face_id, face in enumerate(graph.faces):
        points = face.grid.points
        fit = fit_cylinder(points)
        if fit is None or not _is_concave(points, face.grid.orientation_out, fit):
            continue
        for neighbour in graph.neighbours(face_id):
            if neighbour not in normals:
                normals[neighbour] = plane_normal(graph.faces[neighbour].grid.points, STRAIGHTNESS_TOLERANCE)
            normal = normals[neighbour]
            if normal is not None and abs(float(np.dot(normal, fit.axis))) >= cos_tol:
                holes.append(face_id)
                break
    return holes


def detect_constraints(
    graph: BRepGraph,
    axis_tol_deg: float = 5.0,
    hull_tol: Optional[float] = None,
) -> ConstraintReport:
    return ConstraintReport(
        hull_planes=detect_hull_planes(graph, hull_tol),
        bolt_holes=detect_bolt_holes(graph, axis_tol_deg),
        orientation_known=graph.has_orientation,
    )
