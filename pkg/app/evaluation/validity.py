"""
Kernel-free validity proxy: edge incidence, edge-to-face gaps and dangling
edges.
"""

from __future__ import annotations

import logging
from typing import Dict, Optional, Tuple

import numpy as np
from scipy.spatial import cKDTree

from app.evaluation.surface import Triangles, grid_triangles, point_triangle_distances
from app.geometry.grids import COORD_BINS
from app.schema.reports import GapViolation, IncidenceViolation, ValidityReport
from app.topology.graph import UNASSIGNED, BRepGraph, normalize_graph

logger = logging.getLogger(__name__)

DEFAULT_GAP_TOLERANCE = 2.0 / COORD_BINS


class _FaceSurface:
    """Lazily built lookup structures for one face grid."""

    def __init__(self, points: np.ndarray) -> None:
        self.points = points
        self._tree: Optional[cKDTree] = None
        self._triangles: Optional[Triangles] = None

    @property
    def tree(self) -> cKDTree:
        if self._tree is None:
            self._tree = cKDTree(self.points.reshape(-1, 3))
        return self._tree

    @property
    def triangles(self) -> Triangles:
        if self._triangles is None:
            self._triangles = grid_triangles(self.points)
        return self._triangles

    def max_gap(self, samples: np.ndarray, tol: float) -> float:
        """Largest distance from ``samples`` to the face; exact only above ``tol``."""
        nearest, _ = self.tree.query(samples)
        far = nearest > tol
        if not far.any():
            return float(nearest.max())
        exact = point_triangle_distances(samples[far], self.triangles).min(axis=1)
        return float(max(exact.max(), nearest[~far].max(initial=0.0)))


def check_validity(
    graph: BRepGraph,
    gap_tol: float = DEFAULT_GAP_TOLERANCE,
    normalize: bool = True,
) -> ValidityReport:
    """Check every edge for two incident faces lying within ``gap_tol`` of it.

    With ``normalize`` the solid is first scaled into [-1, 1]^3 so the
    tolerance is measured in coordinate-bin units.
    """
    if normalize and graph.num_faces:
        graph, _ = normalize_graph(graph)

    surfaces: Dict[int, _FaceSurface] = {}
    incidence = []
    gaps = []
    dangling = []
    for edge_id, edge in enumerate(graph.edges):
        assigned: Tuple[int, ...] = tuple(f for f in edge.faces if f != UNASSIGNED)
        if len(assigned) != 2:
            incidence.append(IncidenceViolation(edge=edge_id, incident_faces=len(assigned)))
        if edge.is_dangling:
            dangling.append(edge_id)
        for face_id in assigned:
            surface = surfaces.get(face_id)
            if surface is None:
                surface = surfaces[face_id] = _FaceSurface(graph.faces[face_id].grid.points)
            gap = surface.max_gap(edge.grid.points, gap_tol)
            if gap > gap_tol:
                gaps.append(GapViolation(edge=edge_id, face=face_id, max_gap=gap))

    report = ValidityReport(
        is_manifold_closed=not (incidence or gaps or dangling),
        edge_incidence_violations=incidence,
        geometric_gap_violations=gaps,
        dangling_edges=dangling,
        gap_tolerance=gap_tol,
    )
    logger.debug(
        "validity: %d faces, %d edges, %d violations",
        graph.num_faces,
        graph.num_edges,
        report.violation_count,
    )
    return report
