"""
Parse a token stream back into a placed B-Rep graph.

The parser is a single left-to-right pass over the grammar::

    stream := SEQ_START [META_OPEN complexity META_CLOSE] BREP_START
              level+ BREP_END SEQ_END
    level  := face+ LEVEL_END
    face   := C*6 GF*4 (C*6 GE*2 REF)* FACE_END

Every failure is raised as a ``BRepError`` carrying the token position.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, replace
from enum import Enum
from typing import Dict, List, Optional, Sequence, Tuple, Union

from app.core.errors import DanglingReferenceError, ModeError, ParseError, UnexpectedEndError
from app.fsq.encoder import LatentEncoder, ReferenceEncoder
from app.geometry.canonical import denormalize
from app.geometry.grids import dequantize_box
from app.topology.graph import UNASSIGNED, BRepGraph, EdgeRecord, FaceRecord
from app.topology.references import WindowStride, assign_window_tags, resolve_tags
from app.topology.traversal import EdgeEntry, FaceEntry, TraversalPlan
from app.tokens.stream import TokenStream
from app.tokens.vocabulary import (
    BREP_END,
    BREP_START,
    FACE_END,
    LEVEL_END,
    META_CLOSE,
    META_OPEN,
    REF_UNASSIGNED,
    SEQ_END,
    SEQ_START,
    VOCAB_SIZE,
    Complexity,
    TokenKind,
    describe,
    token_kind,
    token_value,
)

logger = logging.getLogger(__name__)


class DecodeMode(str, Enum):
    UNCONDITIONAL = "uncond"
    AUTOCOMPLETE = "autocomplete"


@dataclass(frozen=True)
class DecodedStream:
    graph: BRepGraph
    meta: Optional[Complexity]
    plan: TraversalPlan
    # [start, end) token span of each level, LEVEL_END included
    level_spans: Tuple[Tuple[int, int], ...]

    def level_of_edge(self) -> Dict[int, int]:
        return {edge.edge_id: level for level, _, edge in self.plan.edge_entries()}


@dataclass
class _ParsedFace:
    bins: Tuple[int, ...]
    code: Tuple[int, ...]
    edges: List[Tuple[Tuple[int, ...], Tuple[int, ...], int, int]]  # bins, code, tag, ref position


class _Cursor:
    def __init__(self, tokens: Sequence[int]) -> None:
        self.tokens = tokens
        self.position = 0

    def peek(self) -> Optional[int]:
        if self.position >= len(self.tokens):
            return None
        return self.tokens[self.position]

    def at_end(self) -> bool:
        return self.position >= len(self.tokens)

    def _fail(self, expected: Sequence[str]) -> None:
        found = self.peek()
        if found is None:
            raise UnexpectedEndError(
                f"stream ended, expected {' or '.join(expected)}",
                position=self.position,
                expected=expected,
            )
        raise ParseError(
            f"unexpected {describe(found)}, expected {' or '.join(expected)}",
            position=self.position,
            expected=expected,
            found=found,
        )

    def kind(self) -> Optional[TokenKind]:
        token = self.peek()
        if token is None:
            return None
        if not 0 <= token < VOCAB_SIZE:
            raise ParseError(
                f"token id {token} outside vocabulary of {VOCAB_SIZE}",
                position=self.position,
                found=token,
            )
        return token_kind(token)

    def expect_id(self, token: int) -> None:
        if self.peek() != token:
            self.kind()
            self._fail([describe(token)])
        self.position += 1

    def expect_kind(self, kind: TokenKind, count: int = 1) -> Tuple[int, ...]:
        values = []
        for _ in range(count):
            if self.kind() is not kind:
                self._fail([kind.value])
            values.append(token_value(self.tokens[self.position]))
            self.position += 1
        return tuple(values)


def _read_box(cursor: _Cursor) -> Tuple[int, ...]:
    start = cursor.position
    bins = cursor.expect_kind(TokenKind.COORD, 6)
    if any(bins[i] > bins[i + 3] for i in range(3)):
        raise ParseError(
            f"inverted bounding box {list(bins)}",
            position=start,
            found=cursor.tokens[start],
        )
    return bins


def _read_face(cursor: _Cursor, mode: DecodeMode) -> _ParsedFace:
    face = _ParsedFace(_read_box(cursor), cursor.expect_kind(TokenKind.FACE_CODE, 4), [])
    while True:
        kind = cursor.kind()
        if cursor.peek() == FACE_END:
            cursor.position += 1
            return face
        if kind is not TokenKind.COORD:
            cursor._fail(["coord", describe(FACE_END)])
        bins = _read_box(cursor)
        code = cursor.expect_kind(TokenKind.EDGE_CODE, 2)
        ref_position = cursor.position
        kind = cursor.kind()
        if kind is TokenKind.REF:
            tag = token_value(cursor.peek())
        elif kind is TokenKind.REF_UNASSIGNED:
            if mode is not DecodeMode.AUTOCOMPLETE:
                raise ModeError(
                    f"unassigned reference outside autocomplete mode at token {ref_position}",
                    position=ref_position,
                )
            tag = UNASSIGNED
        else:
            cursor._fail(["ref", "ref_unassigned"])
        cursor.position += 1
        face.edges.append((bins, code, tag, ref_position))


def _parse(
    tokens: Sequence[int], mode: DecodeMode, partial: bool
) -> Tuple[Optional[Complexity], List[List[_ParsedFace]], List[Tuple[int, int]]]:
    cursor = _Cursor(tokens)
    cursor.expect_id(SEQ_START)
    meta = None
    if cursor.peek() == META_OPEN:
        cursor.position += 1
        if cursor.kind() is not TokenKind.META or Complexity.from_token(cursor.peek()) is None:
            cursor._fail(["EASY", "MEDIUM", "HARD", "RANDOM"])
        meta = Complexity.from_token(cursor.peek())
        cursor.position += 1
        cursor.expect_id(META_CLOSE)
    cursor.expect_id(BREP_START)

    levels: List[List[_ParsedFace]] = []
    spans: List[Tuple[int, int]] = []
    while True:
        start = cursor.position
        faces = [_read_face(cursor, mode)]
        while cursor.peek() != LEVEL_END:
            if cursor.kind() is not TokenKind.COORD:
                cursor._fail(["coord", describe(LEVEL_END)])
            faces.append(_read_face(cursor, mode))
        cursor.position += 1
        levels.append(faces)
        spans.append((start, cursor.position))
        if partial and cursor.at_end():
            return meta, levels, spans
        if cursor.peek() == BREP_END:
            break
        if cursor.kind() is not TokenKind.COORD:
            cursor._fail(["coord", describe(BREP_END)])

    cursor.expect_id(BREP_END)
    cursor.expect_id(SEQ_END)
    if not cursor.at_end():
        raise ParseError(
            f"{len(tokens) - cursor.position} trailing token(s) after SEQ_END",
            position=cursor.position,
            found=cursor.peek(),
        )
    return meta, levels, spans


def decode_stream(
    stream: Union[TokenStream, Sequence[int]],
    mode: DecodeMode = DecodeMode.UNCONDITIONAL,
    stride: WindowStride = WindowStride.ONE,
    partial: bool = False,
    encoder: Optional[LatentEncoder] = None,
) -> DecodedStream:
    """Parse ``stream`` and rebuild faces, edges and incidence.

    ``partial`` accepts a stream that stops right after a LEVEL_END, as an
    autocomplete prefix does.
    """
    mode = DecodeMode(mode)
    encoder = encoder or ReferenceEncoder()
    tokens = tuple(stream)
    meta, parsed_levels, spans = _parse(tokens, mode, partial)

    faces: List[FaceRecord] = []
    edge_geometry: List[Tuple[Tuple[int, ...], Tuple[int, ...]]] = []
    ref_positions: Dict[int, int] = {}
    plan_levels = []
    for parsed in parsed_levels:
        entries = []
        for face in parsed:
            face_id = len(faces)
            box = dequantize_box(face.bins)
            grid = denormalize(encoder.decode_face(face.code, box))
            faces.append(FaceRecord(grid, box, face.code))
            edge_entries = []
            for bins, code, tag, ref_position in face.edges:
                edge_id = len(edge_geometry)
                edge_geometry.append((bins, code))
                ref_positions[edge_id] = ref_position
                edge_entries.append(EdgeEntry(edge_id=edge_id, tag=tag))
            entries.append(FaceEntry(face_id, tuple(edge_entries)))
        plan_levels.append(tuple(entries))
    plan = TraversalPlan(levels=tuple(plan_levels), stride=WindowStride(stride).value)

    try:
        incidence = resolve_tags(plan, stride, autocomplete=mode is DecodeMode.AUTOCOMPLETE)
    except DanglingReferenceError as exc:
        position = ref_positions.get(exc.details.get("edge"), None)
        if position is None:
            raise
        raise DanglingReferenceError(
            f"{exc.message} at token {position}", position=position, **exc.details
        ) from None

    edges = []
    for edge_id, (bins, code) in enumerate(edge_geometry):
        box = dequantize_box(bins)
        grid = denormalize(encoder.decode_edge(code, box))
        owner, other = incidence[edge_id]
        edges.append(EdgeRecord(grid, owner, other, box, code))

    graph = BRepGraph(tuple(faces), tuple(edges), has_orientation=False)
    resolved = TraversalPlan(
        levels=tuple(
            tuple(
                FaceEntry(
                    entry.face_id,
                    tuple(replace(e, ref_face=incidence[e.edge_id][1]) for e in entry.edges),
                )
                for entry in level
            )
            for level in plan.levels
        ),
        stride=plan.stride,
    )
    resolved = assign_window_tags(resolved, stride)
    logger.debug(
        "decoded %d tokens into %d faces, %d edges", len(tokens), graph.num_faces, graph.num_edges
    )
    return DecodedStream(graph=graph, meta=meta, plan=resolved, level_spans=tuple(spans))
