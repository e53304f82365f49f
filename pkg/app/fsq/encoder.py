"""
Latent encoder contract and the deterministic reference encoder.

A face compresses into a 2x2 grid of 4-vectors and an edge into 2 of them,
and each cell quantizes into one FSQ codebook index.

Positions are stored in the frame of the primitive's own bounding box, where
-1 and 1 lie on the box boundary. Both values are FSQ levels, so a corner
sitting on its box quantizes exactly; that covers every rectangle and every
cylinder patch split at its seams. Face cell (a, b) holds the grid corner
(a, b) and edge cell a holds one endpoint. The fourth channel shapes the
primitive between them:

* face cells 0 to 2 carry half the bulge amplitude along x, y and z;
* face cell 3 selects the sweep: -1 an arc along u, 0 flat, 1 an arc along v;
* edge cell 0 selects a straight segment (<= 0) or a half arc (> 0).

An arc moves along its chord with weight (1 - cos(pi t)) / 2 and bulges with
sin(pi t), which is a half circle sampled at uniform angle. An edge arc
bulges towards each box side that neither endpoint touches.

Decoding needs the box the primitive is placed into. Reconstructions are not
clamped and may leave it.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Protocol, Tuple

import numpy as np

from app.core.errors import ContractViolationError
from app.fsq.quantizer import DEFAULT_FSQ, FsqLevels, fsq_dequantize, fsq_quantize_batch
from app.geometry.canonical import CanonicalGrid
from app.geometry.grids import DEGENERATE_EXTENT, GRID_SIZE, Aabb, EdgeGrid, FaceGrid

FACE_CELLS = 4
EDGE_CELLS = 2
LATENT_DIM = 4

# a bound counts as touched within this distance in box units
_TOUCH = 1e-9
# sweep choices closer than this squared error keep the earlier candidate
_TIE = 1e-12

_PARAM = np.linspace(0.0, 1.0, GRID_SIZE)
_ARC_CHORD = (1.0 - np.cos(np.pi * _PARAM)) / 2.0
_ARC_BULGE = np.sin(np.pi * _PARAM)
_ARC_BULGE[[0, -1]] = 0.0

_FACE_CORNERS = (np.array([0, 0, -1, -1]), np.array([0, -1, 0, -1]))


class Sweep(str, Enum):
    """How a face interpolates between its four corners."""

    FLAT = "flat"
    ARC_U = "arc_u"
    ARC_V = "arc_v"

    @property
    def code(self) -> float:
        return {Sweep.ARC_U: -1.0, Sweep.FLAT: 0.0, Sweep.ARC_V: 1.0}[self]

    @classmethod
    def from_code(cls, value: float) -> "Sweep":
        if value < -0.25:
            return cls.ARC_U
        if value > 0.25:
            return cls.ARC_V
        return cls.FLAT


@dataclass(frozen=True, eq=False)
class LatentCode:
    """Continuous cell vectors of one primitive and their codebook indices."""

    cells: np.ndarray
    indices: Tuple[int, ...]

    @property
    def is_face(self) -> bool:
        return len(self.indices) == FACE_CELLS


class LatentEncoder(Protocol):
    """Pluggable geometry compressor used by the tokenizer."""

    def encode_face(self, grid: CanonicalGrid) -> LatentCode: ...

    def decode_face(self, indices: Tuple[int, ...], box: Aabb) -> CanonicalGrid: ...

    def encode_edge(self, grid: CanonicalGrid) -> LatentCode: ...

    def decode_edge(self, indices: Tuple[int, ...], box: Aabb) -> CanonicalGrid: ...


def box_half_extents(box: Aabb) -> np.ndarray:
    """Half extents of ``box`` after unit-cube normalization.

    The longest axis gets 1 and axes without extent get 0.
    """
    extent = np.asarray(box.extent, dtype=np.float64)
    longest = float(extent.max())
    if longest < DEGENERATE_EXTENT:
        return np.zeros(3)
    half = extent / longest
    half[extent < DEGENERATE_EXTENT] = 0.0
    return half


def _to_box_frame(points: np.ndarray, half: np.ndarray) -> np.ndarray:
    safe = np.where(half > 0.0, half, 1.0)
    return np.where(half > 0.0, points / safe, 0.0)


def _snap_positions(positions: np.ndarray, levels: FsqLevels) -> np.ndarray:
    cells = np.zeros((len(positions), LATENT_DIM))
    cells[:, :3] = positions
    return fsq_quantize_batch(cells, levels)[1][:, :3]


def _snap_shape(values: np.ndarray, levels: FsqLevels) -> np.ndarray:
    cells = np.zeros((len(values), LATENT_DIM))
    cells[:, 3] = values
    return fsq_quantize_batch(cells, levels)[1][:, 3]


def _quantize_cells(cells: np.ndarray, levels: FsqLevels) -> LatentCode:
    cells = np.clip(cells, -1.0, 1.0)
    indices, _ = fsq_quantize_batch(cells, levels)
    return LatentCode(cells=cells, indices=tuple(int(i) for i in indices))


def _dequantized_cells(indices: Tuple[int, ...], count: int, levels: FsqLevels) -> np.ndarray:
    if len(indices) != count:
        raise ContractViolationError(
            f"expected {count} latent indices, got {len(indices)}", indices=list(indices)
        )
    return np.array([fsq_dequantize(int(i), levels) for i in indices])


def _face_surface(anchor: np.ndarray, sweep: Sweep, amplitude: np.ndarray) -> np.ndarray:
    s = (_ARC_CHORD if sweep is Sweep.ARC_U else _PARAM)[:, np.newaxis, np.newaxis]
    t = (_ARC_CHORD if sweep is Sweep.ARC_V else _PARAM)[np.newaxis, :, np.newaxis]
    surface = (
        (1 - s) * (1 - t) * anchor[0, 0]
        + (1 - s) * t * anchor[0, 1]
        + s * (1 - t) * anchor[1, 0]
        + s * t * anchor[1, 1]
    )
    if sweep is Sweep.FLAT:
        return surface
    return surface + _bulge_profile(sweep)[..., np.newaxis] * amplitude


def _bulge_profile(sweep: Sweep) -> np.ndarray:
    if sweep is Sweep.ARC_U:
        return np.repeat(_ARC_BULGE[:, np.newaxis], GRID_SIZE, axis=1)
    return np.repeat(_ARC_BULGE[np.newaxis, :], GRID_SIZE, axis=0)


def _fit_face(
    local: np.ndarray, anchor: np.ndarray, half: np.ndarray, levels: FsqLevels
) -> Tuple[Sweep, np.ndarray]:
    """Pick the sweep and quantized bulge that reproduce ``local`` best."""
    best = None
    for sweep in Sweep:
        amplitude = np.zeros(3)
        if sweep is not Sweep.FLAT:
            profile = _bulge_profile(sweep)
            residual = local - _face_surface(anchor, sweep, amplitude)
            fitted = np.tensordot(profile, residual, axes=([0, 1], [0, 1])) / float(np.sum(profile**2))
            amplitude = 2.0 * _snap_shape(fitted / 2.0, levels)
        error = float(np.sum(((_face_surface(anchor, sweep, amplitude) - local) * half) ** 2))
        if best is None or error < best[0] - _TIE:
            best = (error, sweep, amplitude)
    return best[1], best[2]


def reference_encode_face(grid: CanonicalGrid, levels: FsqLevels = DEFAULT_FSQ) -> LatentCode:
    points = grid.grid.points
    if points.shape != (GRID_SIZE, GRID_SIZE, 3):
        raise ContractViolationError("face encoder expects a 32x32 face grid")
    half = box_half_extents(grid.box)
    local = _to_box_frame(points, half)
    corners = np.clip(local[_FACE_CORNERS], -1.0, 1.0)
    anchor = _snap_positions(corners, levels).reshape(2, 2, 3)
    sweep, amplitude = _fit_face(local, anchor, half, levels)

    cells = np.zeros((FACE_CELLS, LATENT_DIM))
    cells[:, :3] = corners
    cells[:3, 3] = amplitude / 2.0
    cells[3, 3] = sweep.code
    return _quantize_cells(cells, levels)


def decode_face_points(indices: Tuple[int, ...], box: Aabb, levels: FsqLevels = DEFAULT_FSQ) -> np.ndarray:
    """Rebuild a canonical 32x32 face grid inside ``box`` from four codebook indices."""
    cells = _dequantized_cells(indices, FACE_CELLS, levels)
    anchor = cells[:, :3].reshape(2, 2, 3)
    surface = _face_surface(anchor, Sweep.from_code(cells[3, 3]), 2.0 * cells[:3, 3])
    return surface * box_half_extents(box)


def reference_decode_face(
    indices: Tuple[int, ...], box: Aabb, levels: FsqLevels = DEFAULT_FSQ
) -> CanonicalGrid:
    return CanonicalGrid(FaceGrid(decode_face_points(indices, box, levels)), box, (False, False))


def _edge_curve(ends: np.ndarray, arc: bool) -> np.ndarray:
    if not arc:
        w = _PARAM[:, np.newaxis]
        return (1 - w) * ends[0] + w * ends[1]
    w = _ARC_CHORD[:, np.newaxis]
    lo, hi, mid = ends.min(axis=0), ends.max(axis=0), ends.mean(axis=0)
    touches_lo = lo <= -1.0 + _TOUCH
    touches_hi = hi >= 1.0 - _TOUCH
    amplitude = np.where(touches_lo & ~touches_hi, 1.0 - mid, 0.0)
    amplitude = np.where(touches_hi & ~touches_lo, -1.0 - mid, amplitude)
    return (1 - w) * ends[0] + w * ends[1] + _ARC_BULGE[:, np.newaxis] * amplitude


def reference_encode_edge(grid: CanonicalGrid, levels: FsqLevels = DEFAULT_FSQ) -> LatentCode:
    points = grid.grid.points
    if points.shape != (GRID_SIZE, 3):
        raise ContractViolationError("edge encoder expects a 32-point edge grid")
    half = box_half_extents(grid.box)
    local = _to_box_frame(points, half)
    ends = np.clip(local[[0, -1]], -1.0, 1.0)
    anchor = _snap_positions(ends, levels)
    straight = float(np.sum(((_edge_curve(anchor, False) - local) * half) ** 2))
    curved = float(np.sum(((_edge_curve(anchor, True) - local) * half) ** 2))

    cells = np.zeros((EDGE_CELLS, LATENT_DIM))
    cells[:, :3] = ends
    cells[0, 3] = 1.0 if curved < straight - _TIE else -1.0
    return _quantize_cells(cells, levels)


def decode_edge_points(indices: Tuple[int, ...], box: Aabb, levels: FsqLevels = DEFAULT_FSQ) -> np.ndarray:
    cells = _dequantized_cells(indices, EDGE_CELLS, levels)
    return _edge_curve(cells[:, :3], bool(cells[0, 3] > 0.0)) * box_half_extents(box)


def reference_decode_edge(
    indices: Tuple[int, ...], box: Aabb, levels: FsqLevels = DEFAULT_FSQ
) -> CanonicalGrid:
    return CanonicalGrid(EdgeGrid(decode_edge_points(indices, box, levels)), box, (False,))


def reconstruction_rmse(original: np.ndarray, reconstructed: np.ndarray) -> float:
    """Root mean squared point-to-point distance between two grids."""
    diff = np.asarray(original, dtype=np.float64) - np.asarray(reconstructed, dtype=np.float64)
    return float(np.sqrt(np.mean(np.sum(diff.reshape(-1, 3) ** 2, axis=1))))


class ReferenceEncoder:
    """Box-frame corner encoder satisfying the ``LatentEncoder`` contract."""

    def __init__(self, levels: FsqLevels = DEFAULT_FSQ) -> None:
        if levels.dim != LATENT_DIM:
            raise ContractViolationError(
                f"reference encoder needs {LATENT_DIM} FSQ dimensions, got {levels.dim}",
                levels=list(levels.levels),
            )
        self.levels = levels

    def encode_face(self, grid: CanonicalGrid) -> LatentCode:
        return reference_encode_face(grid, self.levels)

    def decode_face(self, indices: Tuple[int, ...], box: Aabb) -> CanonicalGrid:
        return reference_decode_face(indices, box, self.levels)

    def encode_edge(self, grid: CanonicalGrid) -> LatentCode:
        return reference_encode_edge(grid, self.levels)

    def decode_edge(self, indices: Tuple[int, ...], box: Aabb) -> CanonicalGrid:
        return reference_decode_edge(indices, box, self.levels)
