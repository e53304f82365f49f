"""
Unit-cube normalization and UV-origin canonicalization of point grids.

Faces are made invariant to the choice of parameter origin by flipping the
grid so the lexicographically smallest (x, then y, then z) corner sits at
index (0, 0). Edges are reversed so the smaller end comes first.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Tuple, Union

import numpy as np

from app.core.errors import DegenerateGeometryError
from app.geometry.grids import (
    DEGENERATE_EXTENT,
    Aabb,
    EdgeGrid,
    FaceGrid,
    Grid,
    compute_aabb,
)

# identity, u-flip, v-flip, both; earlier entries win exact ties
FLIP_CONFIGURATIONS: Tuple[Tuple[bool, bool], ...] = (
    (False, False),
    (True, False),
    (False, True),
    (True, True),
)


def lex_less(a: np.ndarray, b: np.ndarray) -> bool:
    """Strict lexicographic comparison of two flat arrays."""
    differ = np.flatnonzero(a != b)
    if differ.size == 0:
        return False
    i = differ[0]
    return bool(a[i] < b[i])


@dataclass(frozen=True)
class UnitCubeTransform:
    """Affine map of a box onto [-1, 1]^3 with one uniform scale factor."""

    box: Aabb

    def __post_init__(self) -> None:
        if float(self.box.extent.max()) < DEGENERATE_EXTENT:
            raise DegenerateGeometryError(
                "geometry collapses to a point", box=list(self.box.as_array())
            )

    @property
    def scale(self) -> float:
        return 2.0 / float(self.box.extent.max())

    @property
    def flat_axes(self) -> np.ndarray:
        return self.box.extent < DEGENERATE_EXTENT

    def apply(self, points: np.ndarray) -> np.ndarray:
        mapped = (np.asarray(points, dtype=np.float64) - self.box.center) * self.scale
        mapped[..., self.flat_axes] = 0.0
        return np.clip(mapped, -1.0, 1.0)

    def invert(self, points: np.ndarray) -> np.ndarray:
        return denormalize_points(points, self.box)


def denormalize_points(points: np.ndarray, box: Aabb) -> np.ndarray:
    """Map unit-cube points back into ``box``.

    Unlike ``UnitCubeTransform`` this accepts degenerate boxes: axes without
    extent collapse onto the box center, so decoded boxes from a single
    coordinate bin still place their geometry.
    """
    longest = float(box.extent.max())
    center = box.center
    points = np.asarray(points, dtype=np.float64)
    if longest < DEGENERATE_EXTENT:
        return np.broadcast_to(center, points.shape).copy()
    restored = points * (longest / 2.0) + center
    flat = box.extent < DEGENERATE_EXTENT
    restored[..., flat] = center[flat]
    return restored


@dataclass(frozen=True)
class CanonicalGrid:
    """A grid normalized into [-1, 1]^3 with the placement needed to undo it.

    ``flips`` is ``(u_flip, v_flip)`` for faces and ``(reversed,)`` for edges.
    """

    grid: Grid
    box: Aabb
    flips: Tuple[bool, ...]

    @property
    def is_face(self) -> bool:
        return isinstance(self.grid, FaceGrid)


def _face_key(points: np.ndarray) -> np.ndarray:
    # corner, then the (0,1) and (1,0) neighbours, then the whole grid
    return np.concatenate([points[0, 0], points[0, 1], points[1, 0], points.ravel()])


def canonicalize_uv_origin(grid: FaceGrid) -> Tuple[FaceGrid, Tuple[bool, bool]]:
    """Flip the grid so its lexicographically smallest corner becomes the UV origin."""
    best_flips = FLIP_CONFIGURATIONS[0]
    best = grid
    best_key = _face_key(grid.points)
    for flips in FLIP_CONFIGURATIONS[1:]:
        candidate = grid.flipped(*flips)
        key = _face_key(candidate.points)
        if lex_less(key, best_key):
            best, best_key, best_flips = candidate, key, flips
    return best, best_flips


def canonicalize_edge_direction(grid: EdgeGrid) -> Tuple[EdgeGrid, bool]:
    reversed_grid = grid.reversed()
    if lex_less(reversed_grid.points.ravel(), grid.points.ravel()):
        return reversed_grid, True
    return grid, False


def normalize_unit_cube(grid: Grid, box: Optional[Aabb] = None) -> CanonicalGrid:
    """Center at the box midpoint and scale the longest axis onto [-1, 1]."""
    box = box if box is not None else compute_aabb(grid)
    transform = UnitCubeTransform(box)
    points = transform.apply(grid.points)
    if isinstance(grid, FaceGrid):
        return CanonicalGrid(FaceGrid(points, grid.orientation_out), box, (False, False))
    return CanonicalGrid(EdgeGrid(points), box, (False,))


def denormalize(canonical: CanonicalGrid) -> Grid:
    points = denormalize_points(canonical.grid.points, canonical.box)
    if isinstance(canonical.grid, FaceGrid):
        return FaceGrid(points, canonical.grid.orientation_out)
    return EdgeGrid(points)


def canonicalize_face(grid: FaceGrid) -> CanonicalGrid:
    flipped, flips = canonicalize_uv_origin(grid)
    normalized = normalize_unit_cube(flipped)
    return CanonicalGrid(normalized.grid, normalized.box, flips)


def canonicalize_edge(grid: EdgeGrid) -> CanonicalGrid:
    directed, flip = canonicalize_edge_direction(grid)
    normalized = normalize_unit_cube(directed)
    return CanonicalGrid(normalized.grid, normalized.box, (flip,))


def canonicalize(grid: Union[FaceGrid, EdgeGrid]) -> CanonicalGrid:
    if isinstance(grid, FaceGrid):
        return canonicalize_face(grid)
    return canonicalize_edge(grid)
