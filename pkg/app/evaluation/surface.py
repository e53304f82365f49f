"""
Piecewise-planar view of face grids: triangulation, point-to-surface
distance and area-weighted surface sampling.

Each grid cell (i, j) splits into triangles (p[i,j], p[i+1,j], p[i+1,j+1])
and (p[i,j], p[i+1,j+1], p[i,j+1]).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np

from app.core.errors import DegenerateGeometryError
from app.topology.graph import BRepGraph

Triangles = Tuple[np.ndarray, np.ndarray, np.ndarray]

_EPS = 1e-300


def grid_triangles(points: np.ndarray) -> Triangles:
    p00 = points[:-1, :-1].reshape(-1, 3)
    p10 = points[1:, :-1].reshape(-1, 3)
    p11 = points[1:, 1:].reshape(-1, 3)
    p01 = points[:-1, 1:].reshape(-1, 3)
    return (
        np.concatenate([p00, p00]),
        np.concatenate([p10, p11]),
        np.concatenate([p11, p01]),
    )


def triangle_areas(a: np.ndarray, b: np.ndarray, c: np.ndarray) -> np.ndarray:
    return 0.5 * np.linalg.norm(np.cross(b - a, c - a), axis=-1)


def _dot(x: np.ndarray, y: np.ndarray) -> np.ndarray:
    return np.sum(x * y, axis=-1)


def _segment_distances(p: np.ndarray, a: np.ndarray, b: np.ndarray) -> np.ndarray:
    ab = b - a
    length2 = _dot(ab, ab)
    t = np.clip(_dot(p - a, ab) / np.maximum(length2, _EPS), 0.0, 1.0)
    closest = a + t[..., np.newaxis] * ab
    return np.linalg.norm(p - closest, axis=-1)


def point_triangle_distances(points: np.ndarray, triangles: Triangles) -> np.ndarray:
    """Distance matrix ``(n_points, n_triangles)``.

    When the projection of a point lands inside a triangle the distance is
    the plane distance, otherwise the closest point lies on a triangle side.
    """
    a, b, c = (t[np.newaxis, :, :] for t in triangles)
    p = np.asarray(points, dtype=np.float64)[:, np.newaxis, :]
    v0, v1, w = b - a, c - a, p - a
    d00, d01, d11 = _dot(v0, v0), _dot(v0, v1), _dot(v1, v1)
    d20, d21 = _dot(w, v0), _dot(w, v1)
    denom = d00 * d11 - d01 * d01
    with np.errstate(divide="ignore", invalid="ignore"):
        v = (d11 * d20 - d01 * d21) / denom
        u = (d00 * d21 - d01 * d20) / denom
        normal = np.cross(v0, v1)
        plane = np.abs(_dot(w, normal)) / np.sqrt(denom)
    inside = (denom > _EPS) & (v >= 0) & (u >= 0) & (u + v <= 1)
    sides = np.minimum(
        np.minimum(_segment_distances(p, a, b), _segment_distances(p, b, c)),
        _segment_distances(p, c, a),
    )
    return np.where(inside, plane, sides)


@dataclass(frozen=True)
class SurfaceSample:
    points: np.ndarray
    face_ids: np.ndarray


def sample_surface_points(
    graph: BRepGraph,
    n: int = 2000,
    seed: Optional[int] = None,
    rng: Optional[np.random.Generator] = None,
) -> SurfaceSample:
    """Draw ``n`` points uniformly by area over every face of ``graph``."""
    rng = rng if rng is not None else np.random.default_rng(seed)
    tri_a, tri_b, tri_c, owners = [], [], [], []
    for face_id, face in enumerate(graph.faces):
        a, b, c = grid_triangles(face.grid.points)
        tri_a.append(a)
        tri_b.append(b)
        tri_c.append(c)
        owners.append(np.full(len(a), face_id))
    if not tri_a:
        raise DegenerateGeometryError("cannot sample an empty solid")
    a, b, c = np.concatenate(tri_a), np.concatenate(tri_b), np.concatenate(tri_c)
    owners = np.concatenate(owners)
    areas = triangle_areas(a, b, c)
    total = float(areas.sum())
    if total <= 0.0:
        raise DegenerateGeometryError("solid has zero surface area")

    chosen = rng.choice(len(areas), size=n, p=areas / total)
    r1 = np.sqrt(rng.random(n))
    r2 = rng.random(n)
    wa = (1.0 - r1)[:, np.newaxis]
    wb = (r1 * (1.0 - r2))[:, np.newaxis]
    wc = (r1 * r2)[:, np.newaxis]
    points = wa * a[chosen] + wb * b[chosen] + wc * c[chosen]
    return SurfaceSample(points=points, face_ids=owners[chosen])
