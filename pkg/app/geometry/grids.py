"""
Point-grid primitives: face and edge grids, axis-aligned boxes and the
1024-bin coordinate quantizer shared by the token codec.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence, Tuple, Union

import numpy as np

from app.core.errors import MalformedGeometryError

GRID_SIZE = 32
COORD_BINS = 1024
DEGENERATE_EXTENT = 1e-12

Vector3 = Tuple[float, float, float]


def _as_points(points, shape: Tuple[int, ...], kind: str) -> np.ndarray:
    array = np.array(points, dtype=np.float64)
    if array.shape != shape:
        raise MalformedGeometryError(
            f"{kind} grid must have shape {shape}, got {array.shape}",
            expected_shape=list(shape),
            shape=list(array.shape),
        )
    if not np.all(np.isfinite(array)):
        raise MalformedGeometryError(f"{kind} grid contains non-finite coordinates")
    array.setflags(write=False)
    return array


@dataclass(frozen=True, eq=False)
class FaceGrid:
    """32x32 points sampled on a face's UV domain.

    ``points[i, j]`` is the sample at the i-th u value and j-th v value.
    ``orientation_out`` is true when du x dv points out of the solid.
    """

    points: np.ndarray
    orientation_out: bool = True

    def __post_init__(self) -> None:
        object.__setattr__(
            self, "points", _as_points(self.points, (GRID_SIZE, GRID_SIZE, 3), "face")
        )
        object.__setattr__(self, "orientation_out", bool(self.orientation_out))

    def flipped(self, flip_u: bool, flip_v: bool) -> "FaceGrid":
        points = self.points
        if flip_u:
            points = points[::-1, :]
        if flip_v:
            points = points[:, ::-1]
        orientation = self.orientation_out ^ (flip_u != flip_v)
        return FaceGrid(points, orientation)


@dataclass(frozen=True, eq=False)
class EdgeGrid:
    """32 points sampled along an edge's curve parameter."""

    points: np.ndarray

    def __post_init__(self) -> None:
        object.__setattr__(self, "points", _as_points(self.points, (GRID_SIZE, 3), "edge"))

    def reversed(self) -> "EdgeGrid":
        return EdgeGrid(self.points[::-1])


Grid = Union[FaceGrid, EdgeGrid]


@dataclass(frozen=True)
class Aabb:
    """Axis-aligned bounding box given by its min and max corners."""

    min_corner: Vector3
    max_corner: Vector3

    def __post_init__(self) -> None:
        lo = tuple(float(v) for v in self.min_corner)
        hi = tuple(float(v) for v in self.max_corner)
        if len(lo) != 3 or len(hi) != 3:
            raise MalformedGeometryError("box corners must be 3D")
        if not all(np.isfinite(lo + hi)):
            raise MalformedGeometryError("box corners must be finite")
        if any(a > b for a, b in zip(lo, hi)):
            raise MalformedGeometryError(
                "box min corner exceeds max corner", min_corner=list(lo), max_corner=list(hi)
            )
        object.__setattr__(self, "min_corner", lo)
        object.__setattr__(self, "max_corner", hi)

    @classmethod
    def from_array(cls, values: Sequence[float]) -> "Aabb":
        """Build from the flat ``[x0, y0, z0, x1, y1, z1]`` form."""
        values = [float(v) for v in values]
        if len(values) != 6:
            raise MalformedGeometryError(f"box needs 6 values, got {len(values)}")
        return cls(tuple(values[:3]), tuple(values[3:]))

    @classmethod
    def union(cls, boxes: Iterable["Aabb"]) -> "Aabb":
        boxes = list(boxes)
        if not boxes:
            raise MalformedGeometryError("cannot take the union of zero boxes")
        lo = np.min([b.min_corner for b in boxes], axis=0)
        hi = np.max([b.max_corner for b in boxes], axis=0)
        return cls(tuple(lo), tuple(hi))

    def as_array(self) -> np.ndarray:
        return np.array(self.min_corner + self.max_corner, dtype=np.float64)

    @property
    def extent(self) -> np.ndarray:
        return np.subtract(self.max_corner, self.min_corner)

    @property
    def center(self) -> np.ndarray:
        return (np.asarray(self.min_corner) + np.asarray(self.max_corner)) / 2.0

    @property
    def diagonal(self) -> float:
        return float(np.linalg.norm(self.extent))


def compute_aabb(grid: Union[Grid, np.ndarray]) -> Aabb:
    """Componentwise min/max over every grid point."""
    points = grid.points if isinstance(grid, (FaceGrid, EdgeGrid)) else np.asarray(grid, dtype=np.float64)
    flat = points.reshape(-1, 3)
    if flat.size == 0:
        raise MalformedGeometryError("cannot bound an empty point set")
    if not np.all(np.isfinite(flat)):
        raise MalformedGeometryError("grid contains non-finite coordinates")
    return Aabb(tuple(flat.min(axis=0)), tuple(flat.max(axis=0)))


def quantize_coords(values) -> np.ndarray:
    """Vectorized ``quantize_coord``: clamp into [-1, 1] then map to 1024 bins."""
    clipped = np.clip(np.asarray(values, dtype=np.float64), -1.0, 1.0)
    bins = np.floor((clipped + 1.0) / 2.0 * COORD_BINS)
    return np.minimum(COORD_BINS - 1, bins).astype(np.int64)


def dequantize_coords(bins) -> np.ndarray:
    """Bin centers for an array of bins."""
    return 2.0 * (np.asarray(bins, dtype=np.float64) + 0.5) / COORD_BINS - 1.0


def quantize_coord(value: float) -> int:
    return int(quantize_coords(value))


def dequantize_coord(bin_index: int) -> float:
    return float(dequantize_coords(bin_index))


def quantize_box(box: Aabb) -> Tuple[int, ...]:
    """Six coordinate bins ``(x0, y0, z0, x1, y1, z1)`` of a normalized box."""
    return tuple(int(b) for b in quantize_coords(box.as_array()))


def dequantize_box(bins: Sequence[int]) -> Aabb:
    return Aabb.from_array(dequantize_coords(list(bins)))
