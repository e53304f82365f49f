"""
Augmentation transforms: quarter-turn rotations and domain-box jitter.
"""

from __future__ import annotations

import numpy as np

from app.core.errors import ContractViolationError
from app.geometry.grids import Aabb

AXES = {"x": 0, "y": 1, "z": 2}

# (cos, sin) of k quarter turns
_QUARTER_TURNS = {0: (1, 0), 1: (0, 1), 2: (-1, 0), 3: (0, -1)}


def rotation_matrix(axis: str, quarter_turns: int) -> np.ndarray:
    """Exact integer rotation by ``quarter_turns`` x 90 degrees about ``axis``."""
    if axis not in AXES:
        raise ContractViolationError(f"unknown rotation axis {axis!r}", axis=axis)
    c, s = _QUARTER_TURNS[quarter_turns % 4]
    i = AXES[axis]
    j, k = [a for a in range(3) if a != i]
    matrix = np.eye(3)
    matrix[j, j], matrix[j, k] = c, -s
    matrix[k, j], matrix[k, k] = s, c
    return matrix


def rotate_points(points: np.ndarray, axis: str, quarter_turns: int) -> np.ndarray:
    return np.asarray(points, dtype=np.float64) @ rotation_matrix(axis, quarter_turns).T


def jitter_domain_box(box: Aabb, rng: np.random.Generator, fraction: float = 0.15) -> Aabb:
    """Randomly translate and scale a domain box by up to ``fraction`` of its extent."""
    if not 0.0 <= fraction < 1.0:
        raise ContractViolationError("jitter fraction must lie in [0, 1)", fraction=fraction)
    extent = box.extent
    shift = rng.uniform(-fraction, fraction, size=3) * extent
    scale = rng.uniform(1.0 - fraction, 1.0 + fraction, size=3)
    center = box.center + shift
    half = extent * scale / 2.0
    return Aabb(tuple(center - half), tuple(center + half))
