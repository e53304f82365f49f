"""
Serialize a traversal plan and its geometry into a token stream.

Per face the stream carries six coordinate tokens for the face box, four face
codebook tokens, then per edge six coordinate tokens, two edge codebook
tokens and one reference tag, closed by FACE_END. Every level ends with
LEVEL_END.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Iterator, List, Optional, Tuple

from app.core.errors import ContractViolationError
from app.fsq.encoder import EDGE_CELLS, FACE_CELLS, LatentEncoder, ReferenceEncoder
from app.geometry.canonical import canonicalize_edge, canonicalize_face
from app.geometry.grids import quantize_box
from app.topology.graph import UNASSIGNED, BRepGraph
from app.topology.traversal import FaceEntry, TraversalPlan
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
    Complexity,
    coord_token,
    edge_code_token,
    face_code_token,
    ref_token,
)

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class PrimitiveCodes:
    """Codebook indices of every face and edge, indexed by primitive id."""

    faces: Tuple[Tuple[int, ...], ...]
    edges: Tuple[Tuple[int, ...], ...]


def encode_latents(graph: BRepGraph, encoder: Optional[LatentEncoder] = None) -> PrimitiveCodes:
    """Canonicalize and compress every primitive.

    Records that already carry decoded codes keep them unchanged.
    """
    encoder = encoder or ReferenceEncoder()
    faces = tuple(
        face.code if face.code is not None else encoder.encode_face(canonicalize_face(face.grid)).indices
        for face in graph.faces
    )
    edges = tuple(
        edge.code if edge.code is not None else encoder.encode_edge(canonicalize_edge(edge.grid)).indices
        for edge in graph.edges
    )
    return PrimitiveCodes(faces, edges)


def expected_length(num_levels: int, num_faces: int, num_edges: int, meta: bool) -> int:
    """Token count of a complete stream."""
    return 2 + (3 if meta else 0) + 1 + num_levels + 11 * num_faces + 9 * num_edges + 1


def _check_consistency(graph: BRepGraph, plan: TraversalPlan, codes: PrimitiveCodes) -> None:
    if graph.num_faces == 0:
        raise ContractViolationError("cannot tokenize an empty graph")
    face_order = plan.face_order
    if sorted(face_order) != list(range(graph.num_faces)):
        raise ContractViolationError(
            "plan does not visit every face exactly once",
            faces=graph.num_faces,
            visited=len(face_order),
        )
    edge_ids = sorted(edge.edge_id for _, _, edge in plan.edge_entries())
    if edge_ids != list(range(graph.num_edges)):
        raise ContractViolationError(
            "plan does not emit every edge exactly once",
            edges=graph.num_edges,
            emitted=len(edge_ids),
        )
    if len(codes.faces) != graph.num_faces or len(codes.edges) != graph.num_edges:
        raise ContractViolationError("latent codes do not match the graph")
    for code in codes.faces:
        if len(code) != FACE_CELLS:
            raise ContractViolationError(f"face code needs {FACE_CELLS} indices, got {len(code)}")
    for code in codes.edges:
        if len(code) != EDGE_CELLS:
            raise ContractViolationError(f"edge code needs {EDGE_CELLS} indices, got {len(code)}")


def _box_tokens(box) -> List[int]:
    return [coord_token(b) for b in quantize_box(box)]


def _face_block(graph: BRepGraph, entry: FaceEntry, codes: PrimitiveCodes) -> Iterator[int]:
    yield from _box_tokens(graph.faces[entry.face_id].box)
    yield from (face_code_token(i) for i in codes.faces[entry.face_id])
    for edge in entry.edges:
        if edge.tag is None:
            raise ContractViolationError(
                f"edge {edge.edge_id} has no reference tag; assign window tags first",
                edge=edge.edge_id,
            )
        yield from _box_tokens(graph.edges[edge.edge_id].box)
        yield from (edge_code_token(i) for i in codes.edges[edge.edge_id])
        yield REF_UNASSIGNED if edge.tag == UNASSIGNED else ref_token(edge.tag)
    yield FACE_END


def level_tokens(graph: BRepGraph, plan: TraversalPlan, codes: PrimitiveCodes, level: int) -> List[int]:
    """Tokens of one BFT level including its LEVEL_END."""
    tokens: List[int] = []
    for entry in plan.levels[level]:
        tokens.extend(_face_block(graph, entry, codes))
    tokens.append(LEVEL_END)
    return tokens


def stream_header(meta: Optional[Complexity]) -> List[int]:
    tokens = [SEQ_START]
    if meta is not None:
        tokens += [META_OPEN, Complexity(meta).token, META_CLOSE]
    tokens.append(BREP_START)
    return tokens


STREAM_FOOTER = (BREP_END, SEQ_END)


def encode_stream(
    graph: BRepGraph,
    plan: TraversalPlan,
    meta: Optional[Complexity],
    codes: PrimitiveCodes,
) -> TokenStream:
    """Emit the complete token stream of a tagged plan."""
    _check_consistency(graph, plan, codes)
    tokens = stream_header(meta)
    for level in range(len(plan.levels)):
        tokens.extend(level_tokens(graph, plan, codes, level))
    tokens.extend(STREAM_FOOTER)
    logger.debug(
        "encoded %d faces, %d edges into %d tokens",
        graph.num_faces,
        graph.num_edges,
        len(tokens),
    )
    return TokenStream(tuple(tokens))
