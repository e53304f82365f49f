"""
Token codec: vocabulary, stream containers, encoder, decoder and
autocomplete conditioning.
"""

from .vocabulary import (
    VOCAB_SIZE,
    VOCAB_VERSION,
    Complexity,
    TokenKind,
    dequantize_coord,
    describe,
    quantize_coord,
    token_kind,
    vocabulary_manifest,
)
from .stream import TokenStream, read_stream, write_stream
from .encoder import PrimitiveCodes, encode_latents, encode_stream, expected_length
from .decoder import DecodedStream, DecodeMode, decode_stream
from .autocomplete import (
    UnassignedResolution,
    encode_autocomplete_prefix,
    encode_autocomplete_stream,
    resolve_unassigned,
)

__all__ = [
    "VOCAB_SIZE",
    "VOCAB_VERSION",
    "Complexity",
    "TokenKind",
    "dequantize_coord",
    "describe",
    "quantize_coord",
    "token_kind",
    "vocabulary_manifest",
    "TokenStream",
    "read_stream",
    "write_stream",
    "PrimitiveCodes",
    "encode_latents",
    "encode_stream",
    "expected_length",
    "DecodedStream",
    "DecodeMode",
    "decode_stream",
    "UnassignedResolution",
    "encode_autocomplete_prefix",
    "encode_autocomplete_stream",
    "resolve_unassigned",
]
