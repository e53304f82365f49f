"""
End-to-end tokenizer pipeline: normalize, encode latents, traverse, tag and
serialize; plus the inverse and a round-trip checker.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Optional, Union

import numpy as np

from app.config import get_settings
from app.core.errors import LimitExceededError
from app.core.logging import log_with_extra
from app.fsq.encoder import LatentEncoder
from app.geometry.grids import COORD_BINS
from app.schema.reports import RoundTripReport, StreamStats
from app.topology.graph import BRepGraph, normalize_graph
from app.topology.references import WindowStride, assign_window_tags
from app.topology.traversal import FaceOrdering, TraversalPlan, traverse
from app.tokens.autocomplete import UnassignedResolution, resolve_unassigned
from app.tokens.decoder import DecodedStream, DecodeMode, decode_stream
from app.tokens.encoder import PrimitiveCodes, encode_latents, encode_stream
from app.tokens.stream import TokenStream
from app.tokens.vocabulary import SEQ_END, Complexity

logger = logging.getLogger(__name__)

AUTO_META = "auto"
PLACEMENT_BOUND = 1.0 / COORD_BINS

MetaOption = Union[None, str, Complexity]


@dataclass(frozen=True)
class Tokenized:
    stream: TokenStream
    graph: BRepGraph
    plan: TraversalPlan
    codes: PrimitiveCodes
    meta: Optional[Complexity]


def resolve_meta(meta: MetaOption, num_faces: int) -> Optional[Complexity]:
    """``auto`` picks the class from the face count; ``None``/``none`` omits the meta block."""
    if meta is None or meta == "none":
        return None
    if meta == AUTO_META:
        return Complexity.from_face_count(num_faces)
    return Complexity(meta)


def check_limits(graph: BRepGraph, max_faces: int, max_edges: int) -> None:
    if graph.num_faces > max_faces:
        raise LimitExceededError(
            f"solid has {graph.num_faces} faces, limit is {max_faces}",
            faces=graph.num_faces,
            limit=max_faces,
        )
    if graph.num_edges > max_edges:
        raise LimitExceededError(
            f"solid has {graph.num_edges} edges, limit is {max_edges}",
            edges=graph.num_edges,
            limit=max_edges,
        )


def tokenize(
    graph: BRepGraph,
    stride: WindowStride = WindowStride.ONE,
    meta: MetaOption = None,
    encoder: Optional[LatentEncoder] = None,
    normalize: bool = True,
    enforce_limits: bool = True,
    ordering: FaceOrdering = FaceOrdering.BFT,
) -> Tokenized:
    """Compile ``graph`` into a token stream.

    With ``normalize`` the solid is first scaled into [-1, 1]^3 and the
    returned ``graph`` is the normalized one the stream describes.
    ``ordering`` picks breadth-first levels or a single coordinate-sorted level.
    """
    settings = get_settings()
    if enforce_limits:
        check_limits(graph, settings.MAX_FACES, settings.MAX_EDGES)
    if normalize:
        graph, _ = normalize_graph(graph)
    complexity = resolve_meta(meta, graph.num_faces)
    plan = assign_window_tags(traverse(graph, ordering), stride)
    codes = encode_latents(graph, encoder)
    stream = encode_stream(graph, plan, complexity, codes)
    if len(stream) > settings.MAX_SEQUENCE_TOKENS:
        log_with_extra(
            logger,
            "warning",
            "token stream exceeds the sequence length budget",
            tokens=len(stream),
            budget=settings.MAX_SEQUENCE_TOKENS,
            faces=graph.num_faces,
        )
    return Tokenized(stream=stream, graph=graph, plan=plan, codes=codes, meta=complexity)


def detokenize(
    stream: TokenStream,
    mode: DecodeMode = DecodeMode.UNCONDITIONAL,
    stride: WindowStride = WindowStride.ONE,
    encoder: Optional[LatentEncoder] = None,
) -> UnassignedResolution:
    """Decode ``stream``; in autocomplete mode dangling edges are merged where possible."""
    decoded = decode_stream(stream, mode=mode, stride=stride, encoder=encoder)
    if DecodeMode(mode) is DecodeMode.AUTOCOMPLETE:
        return resolve_unassigned(decoded)
    return UnassignedResolution(graph=decoded.graph, merged=(), unmatched=())


def _max_box_error(decoded_boxes, original_boxes) -> float:
    if not decoded_boxes:
        return 0.0
    decoded = np.array([box.as_array() for box in decoded_boxes])
    original = np.array([box.as_array() for box in original_boxes])
    return float(np.abs(decoded - original).max())


def roundtrip_check(
    graph: BRepGraph,
    stride: WindowStride = WindowStride.ONE,
    meta: MetaOption = None,
    encoder: Optional[LatentEncoder] = None,
    normalize: bool = True,
    ordering: FaceOrdering = FaceOrdering.BFT,
) -> RoundTripReport:
    """Tokenize then detokenize ``graph`` and compare topology and placement."""
    tokenized = tokenize(graph, stride, meta, encoder, normalize, ordering=ordering)
    original = tokenized.graph
    decoded: DecodedStream = decode_stream(tokenized.stream, stride=stride, encoder=encoder)

    face_mapping = tokenized.plan.face_order
    edge_mapping = [edge.edge_id for _, _, edge in tokenized.plan.edge_entries()]
    remapped = [
        tuple(sorted(face_mapping[f] for f in edge.faces))
        for edge in decoded.graph.edges
    ]
    topology_identical = (
        decoded.graph.num_faces == original.num_faces
        and sorted(remapped) == sorted(tuple(sorted(e.faces)) for e in original.edges)
    )
    face_error = _max_box_error(
        [face.box for face in decoded.graph.faces],
        [original.faces[i].box for i in face_mapping],
    )
    edge_error = _max_box_error(
        [edge.box for edge in decoded.graph.edges],
        [original.edges[i].box for i in edge_mapping],
    )
    bound = PLACEMENT_BOUND * (1.0 + 1e-9)
    report = RoundTripReport(
        topology_identical=topology_identical,
        placement_ok=face_error <= bound and edge_error <= bound,
        max_face_box_error=face_error,
        max_edge_box_error=edge_error,
        tokens=len(tokenized.stream),
        face_mapping=list(face_mapping),
    )
    logger.debug("round trip: %s", report.model_dump(exclude={"face_mapping"}))
    return report


def stream_stats(stream: TokenStream, stride: WindowStride = WindowStride.ONE) -> StreamStats:
    """Counts by token kind plus the structure recovered by parsing.

    A stream that stops after a LEVEL_END is read as an autocomplete prefix.
    """
    partial = len(stream) > 0 and stream[-1] != SEQ_END
    decoded = decode_stream(stream, mode=DecodeMode.AUTOCOMPLETE, stride=stride, partial=partial)
    graph = decoded.graph
    complexity = decoded.meta if decoded.meta is not None else Complexity.from_face_count(graph.num_faces)
    return StreamStats(
        tokens=len(stream),
        faces=graph.num_faces,
        edges=graph.num_edges,
        levels=len(decoded.plan.levels),
        faces_per_level=[len(level) for level in decoded.plan.levels],
        kinds=stream.kind_counts(),
        complexity=complexity.value,
        meta=decoded.meta.value if decoded.meta is not None else None,
    )
