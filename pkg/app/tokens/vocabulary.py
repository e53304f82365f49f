"""
Token vocabulary layout.

Ids are frozen by the stream format:

    0-5       sentinels
    6-11      complexity meta tokens
    12-1035   coordinate bins (1024)
    1036-2035 face codebook indices
    2036-3035 edge codebook indices
    3036-3235 reference tags T0..T199
    3236      T_u, unassigned reference
"""

from __future__ import annotations

from enum import Enum
from typing import Any, Dict, List, Optional

from app.core.errors import InvalidCodeError
from app.fsq.quantizer import DEFAULT_FSQ
from app.geometry.grids import (  # noqa: F401  re-exported for codec users
    COORD_BINS,
    dequantize_box,
    dequantize_coord,
    quantize_box,
    quantize_coord,
)
from app.topology.references import WINDOW_CAPACITY

VOCAB_VERSION = "1"

SEQ_START = 0
SEQ_END = 1
BREP_START = 2
BREP_END = 3
LEVEL_END = 4
FACE_END = 5
META_OPEN = 6
META_CLOSE = 7
EASY = 8
MEDIUM = 9
HARD = 10
RANDOM = 11

COORD_OFFSET = 12
FACE_CODE_OFFSET = COORD_OFFSET + COORD_BINS
EDGE_CODE_OFFSET = FACE_CODE_OFFSET + DEFAULT_FSQ.codebook_size
REF_OFFSET = EDGE_CODE_OFFSET + DEFAULT_FSQ.codebook_size
REF_UNASSIGNED = REF_OFFSET + WINDOW_CAPACITY
VOCAB_SIZE = REF_UNASSIGNED + 1

SENTINEL_NAMES = {
    SEQ_START: "SEQ_START",
    SEQ_END: "SEQ_END",
    BREP_START: "BREP_START",
    BREP_END: "BREP_END",
    LEVEL_END: "LEVEL_END",
    FACE_END: "FACE_END",
    META_OPEN: "META_OPEN",
    META_CLOSE: "META_CLOSE",
    EASY: "EASY",
    MEDIUM: "MEDIUM",
    HARD: "HARD",
    RANDOM: "RANDOM",
}


class TokenKind(str, Enum):
    SENTINEL = "sentinel"
    META = "meta"
    COORD = "coord"
    FACE_CODE = "face_code"
    EDGE_CODE = "edge_code"
    REF = "ref"
    REF_UNASSIGNED = "ref_unassigned"


class Complexity(str, Enum):
    EASY = "easy"
    MEDIUM = "medium"
    HARD = "hard"
    RANDOM = "random"

    @classmethod
    def from_face_count(cls, faces: int) -> "Complexity":
        if faces < 25:
            return cls.EASY
        if faces <= 50:
            return cls.MEDIUM
        return cls.HARD

    @property
    def token(self) -> int:
        return _COMPLEXITY_TOKENS[self]

    @classmethod
    def from_token(cls, token: int) -> Optional["Complexity"]:
        return _TOKEN_COMPLEXITY.get(token)

    def matches(self, faces: int) -> bool:
        return self is Complexity.RANDOM or self is Complexity.from_face_count(faces)


_COMPLEXITY_TOKENS = {
    Complexity.EASY: EASY,
    Complexity.MEDIUM: MEDIUM,
    Complexity.HARD: HARD,
    Complexity.RANDOM: RANDOM,
}
_TOKEN_COMPLEXITY = {token: c for c, token in _COMPLEXITY_TOKENS.items()}

# (kind, first id, count)
RANGES = (
    (TokenKind.SENTINEL, SEQ_START, 6),
    (TokenKind.META, META_OPEN, 6),
    (TokenKind.COORD, COORD_OFFSET, COORD_BINS),
    (TokenKind.FACE_CODE, FACE_CODE_OFFSET, DEFAULT_FSQ.codebook_size),
    (TokenKind.EDGE_CODE, EDGE_CODE_OFFSET, DEFAULT_FSQ.codebook_size),
    (TokenKind.REF, REF_OFFSET, WINDOW_CAPACITY),
    (TokenKind.REF_UNASSIGNED, REF_UNASSIGNED, 1),
)


def token_kind(token: int) -> TokenKind:
    for kind, first, count in RANGES:
        if first <= token < first + count:
            return kind
    raise InvalidCodeError(f"token id {token} outside vocabulary of {VOCAB_SIZE}", token=token)


def _checked(value: int, count: int, what: str) -> int:
    if not 0 <= value < count:
        raise InvalidCodeError(f"{what} {value} outside [0, {count})", value=int(value))
    return int(value)


def coord_token(bin_index: int) -> int:
    return COORD_OFFSET + _checked(bin_index, COORD_BINS, "coordinate bin")


def face_code_token(index: int) -> int:
    return FACE_CODE_OFFSET + _checked(index, DEFAULT_FSQ.codebook_size, "face code")


def edge_code_token(index: int) -> int:
    return EDGE_CODE_OFFSET + _checked(index, DEFAULT_FSQ.codebook_size, "edge code")


def ref_token(tag: int) -> int:
    return REF_OFFSET + _checked(tag, WINDOW_CAPACITY, "reference tag")


def token_value(token: int) -> int:
    """Payload of a coord, code or reference token (its offset within the range)."""
    kind = token_kind(token)
    for range_kind, first, _ in RANGES:
        if range_kind is kind:
            return token - first
    raise InvalidCodeError(f"token {token} has no payload")  # pragma: no cover


def describe(token: int) -> str:
    """Human-readable token name used in diagnostics."""
    if token in SENTINEL_NAMES:
        return SENTINEL_NAMES[token]
    try:
        kind = token_kind(token)
    except InvalidCodeError:
        return f"<invalid {token}>"
    if kind is TokenKind.COORD:
        return f"C{token - COORD_OFFSET}"
    if kind is TokenKind.FACE_CODE:
        return f"GF{token - FACE_CODE_OFFSET}"
    if kind is TokenKind.EDGE_CODE:
        return f"GE{token - EDGE_CODE_OFFSET}"
    if kind is TokenKind.REF:
        return f"T{token - REF_OFFSET}"
    return "T_u"


def vocabulary_manifest() -> Dict[str, Any]:
    """Versioned id-range table served by the ``vocabulary`` command and endpoint."""
    ranges: List[Dict[str, Any]] = [
        {"kind": kind.value, "first": first, "last": first + count - 1, "count": count}
        for kind, first, count in RANGES
    ]
    return {
        "vocabulary_version": VOCAB_VERSION,
        "size": VOCAB_SIZE,
        "fsq_levels": list(DEFAULT_FSQ.levels),
        "coordinate_bins": COORD_BINS,
        "window_capacity": WINDOW_CAPACITY,
        "ranges": ranges,
        "named_tokens": {name: token for token, name in SENTINEL_NAMES.items()},
    }
