"""
FSQ codec: the scalar quantizer and the reference latent encoder.
"""

from .quantizer import (
    DEFAULT_FSQ,
    DEFAULT_LEVELS,
    FsqLevels,
    fsq_dequantize,
    fsq_level_indices,
    fsq_quantize,
    fsq_quantize_batch,
)
from .encoder import (
    EDGE_CELLS,
    FACE_CELLS,
    LATENT_DIM,
    LatentCode,
    LatentEncoder,
    ReferenceEncoder,
    Sweep,
    box_half_extents,
    reconstruction_rmse,
    reference_decode_edge,
    reference_decode_face,
    reference_encode_edge,
    reference_encode_face,
)

__all__ = [
    "DEFAULT_FSQ",
    "DEFAULT_LEVELS",
    "FsqLevels",
    "fsq_dequantize",
    "fsq_level_indices",
    "fsq_quantize",
    "fsq_quantize_batch",
    "EDGE_CELLS",
    "FACE_CELLS",
    "LATENT_DIM",
    "LatentCode",
    "LatentEncoder",
    "ReferenceEncoder",
    "Sweep",
    "box_half_extents",
    "reconstruction_rmse",
    "reference_decode_edge",
    "reference_decode_face",
    "reference_encode_edge",
    "reference_encode_face",
]
