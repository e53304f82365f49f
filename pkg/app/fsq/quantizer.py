"""
Finite scalar quantization.

Each latent dimension is clamped to [-1, 1] and rounded onto ``L_i`` evenly
spaced levels. The per-dimension level indices ``k_i`` pack into a single
codebook index with dimension 0 as the least significant digit.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence, Tuple

import numpy as np

from app.core.errors import ContractViolationError, InvalidCodeError

DEFAULT_LEVELS: Tuple[int, ...] = (8, 5, 5, 5)


@dataclass(frozen=True)
class FsqLevels:
    levels: Tuple[int, ...] = DEFAULT_LEVELS

    def __post_init__(self) -> None:
        levels = tuple(int(level) for level in self.levels)
        if not levels or any(level < 2 for level in levels):
            raise ContractViolationError("FSQ levels must all be >= 2", levels=list(levels))
        object.__setattr__(self, "levels", levels)

    @property
    def dim(self) -> int:
        return len(self.levels)

    @property
    def codebook_size(self) -> int:
        return int(np.prod(self.levels))

    @property
    def radix(self) -> np.ndarray:
        """Place value of each dimension in the packed index."""
        return np.concatenate([[1], np.cumprod(self.levels[:-1])]).astype(np.int64)

    @property
    def max_error(self) -> np.ndarray:
        """Largest per-dimension snap error, half a level step."""
        return 1.0 / (np.asarray(self.levels, dtype=np.float64) - 1.0)


DEFAULT_FSQ = FsqLevels()


def _level_indices(values: np.ndarray, levels: FsqLevels) -> np.ndarray:
    span = np.asarray(levels.levels, dtype=np.float64) - 1.0
    scaled = (np.clip(values, -1.0, 1.0) + 1.0) / 2.0 * span
    # scaled is non-negative, so floor(x + 0.5) rounds halves away from zero
    k = np.floor(scaled + 0.5)
    return np.clip(k, 0, span).astype(np.int64)


def _snap(k: np.ndarray, levels: FsqLevels) -> np.ndarray:
    span = np.asarray(levels.levels, dtype=np.float64) - 1.0
    return 2.0 * k / span - 1.0


def fsq_quantize_batch(
    vectors: np.ndarray, levels: FsqLevels = DEFAULT_FSQ
) -> Tuple[np.ndarray, np.ndarray]:
    """Quantize an ``(n, dim)`` array; returns ``(indices, snapped)``."""
    vectors = np.asarray(vectors, dtype=np.float64)
    if vectors.ndim != 2 or vectors.shape[1] != levels.dim:
        raise ContractViolationError(
            f"expected vectors of dimension {levels.dim}, got shape {vectors.shape}",
            expected_dim=levels.dim,
            shape=list(vectors.shape),
        )
    if np.isnan(vectors).any():
        raise ContractViolationError("cannot quantize NaN latent values")
    k = _level_indices(vectors, levels)
    return k @ levels.radix, _snap(k, levels)


def fsq_quantize(vector: Sequence[float], levels: FsqLevels = DEFAULT_FSQ) -> Tuple[int, np.ndarray]:
    """Quantize one latent vector into its codebook index and snapped value."""
    vector = np.asarray(vector, dtype=np.float64)
    if vector.shape != (levels.dim,):
        raise ContractViolationError(
            f"expected a vector of dimension {levels.dim}, got shape {vector.shape}",
            expected_dim=levels.dim,
            shape=list(vector.shape),
        )
    indices, snapped = fsq_quantize_batch(vector[np.newaxis, :], levels)
    return int(indices[0]), snapped[0]


def fsq_level_indices(index: int, levels: FsqLevels = DEFAULT_FSQ) -> np.ndarray:
    """Mixed-radix decomposition of a codebook index into per-dimension levels."""
    if isinstance(index, bool) or not isinstance(index, (int, np.integer)):
        raise InvalidCodeError(f"codebook index must be an integer, got {index!r}")
    if not 0 <= index < levels.codebook_size:
        raise InvalidCodeError(
            f"codebook index {index} outside [0, {levels.codebook_size})",
            index=int(index),
            codebook_size=levels.codebook_size,
        )
    return (int(index) // levels.radix) % np.asarray(levels.levels, dtype=np.int64)


def fsq_dequantize(index: int, levels: FsqLevels = DEFAULT_FSQ) -> np.ndarray:
    return _snap(fsq_level_indices(index, levels), levels)
