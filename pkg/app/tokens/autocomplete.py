"""
Autocomplete conditioning.

User faces become the first BFT level of the stream. Their edges to faces
the user did not supply carry the dummy reference T_u; a continuation
re-emits each such edge under its second face with a concrete tag, and
``resolve_unassigned`` merges the two copies after decoding.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, replace
from typing import Dict, List, Optional, Sequence, Tuple

from app.core.errors import WindowCapacityError
from app.fsq.encoder import LatentEncoder
from app.geometry.canonical import UnitCubeTransform
from app.geometry.grids import Aabb, quantize_box
from app.topology.graph import UNASSIGNED, BRepGraph, extract_user_graph
from app.topology.references import WINDOW_CAPACITY, WindowStride, assign_window_tags
from app.topology.traversal import bft_levels
from app.tokens.decoder import DecodedStream
from app.tokens.encoder import STREAM_FOOTER, encode_latents, level_tokens, stream_header
from app.tokens.stream import TokenStream
from app.tokens.vocabulary import Complexity

logger = logging.getLogger(__name__)


def to_domain(graph: BRepGraph, domain_box: Aabb) -> BRepGraph:
    """Express ``graph`` in the unit cube that ``domain_box`` maps onto."""
    return graph.map_points(UnitCubeTransform(domain_box).apply)


def _prefix_tokens(
    user_graph: BRepGraph,
    stride: WindowStride,
    meta: Optional[Complexity],
    encoder: Optional[LatentEncoder],
) -> List[int]:
    if user_graph.num_faces > WINDOW_CAPACITY:
        raise WindowCapacityError(
            f"{user_graph.num_faces} user faces exceed the window capacity of {WINDOW_CAPACITY}",
            faces=user_graph.num_faces,
        )
    plan = bft_levels(user_graph, start=range(user_graph.num_faces))
    plan = assign_window_tags(plan, stride)
    codes = encode_latents(user_graph, encoder)
    return stream_header(meta) + level_tokens(user_graph, plan, codes, 0)


def encode_autocomplete_prefix(
    user_graph: BRepGraph,
    domain_box: Aabb,
    stride: WindowStride = WindowStride.ONE,
    meta: Optional[Complexity] = None,
    encoder: Optional[LatentEncoder] = None,
) -> TokenStream:
    """Conditioning prefix ending right after the first LEVEL_END."""
    user_graph = to_domain(user_graph, domain_box)
    tokens = _prefix_tokens(user_graph, WindowStride(stride), meta, encoder)
    logger.debug(
        "autocomplete prefix: %d user faces, %d dangling edges, %d tokens",
        user_graph.num_faces,
        len(user_graph.dangling_edges()),
        len(tokens),
    )
    return TokenStream(tuple(tokens))


def encode_autocomplete_stream(
    graph: BRepGraph,
    user_faces: Sequence[int],
    domain_box: Aabb,
    stride: WindowStride = WindowStride.ONE,
    meta: Optional[Complexity] = None,
    encoder: Optional[LatentEncoder] = None,
) -> TokenStream:
    """Prefix for ``user_faces`` followed by the rest of ``graph`` as its continuation.

    Levels after the first come from a traversal of the whole solid started
    at the user faces, so every dangling user edge reappears under its
    second face with a concrete reference.
    """
    stride = WindowStride(stride)
    graph = to_domain(graph, domain_box)
    user_graph = extract_user_graph(graph, user_faces)
    tokens = _prefix_tokens(user_graph, stride, meta, encoder)

    plan = assign_window_tags(bft_levels(graph, start=sorted(set(user_faces))), stride)
    codes = encode_latents(graph, encoder)
    for level in range(1, len(plan.levels)):
        tokens.extend(level_tokens(graph, plan, codes, level))
    tokens.extend(STREAM_FOOTER)
    return TokenStream(tuple(tokens))


@dataclass(frozen=True)
class UnassignedResolution:
    graph: BRepGraph
    # (T_u edge id, merged duplicate edge id in the decoded graph)
    merged: Tuple[Tuple[int, int], ...]
    # edge ids of the output graph still missing a second face
    unmatched: Tuple[int, ...]

    @property
    def is_complete(self) -> bool:
        return not self.unmatched


def resolve_unassigned(decoded: DecodedStream) -> UnassignedResolution:
    """Unify each T_u edge with its re-emitted copy from a later level.

    A copy matches when it has a concrete reference, lies in a later level,
    touches the T_u edge's known face, and has the same quantized box and
    edge codebook tokens. The T_u edge keeps its id and gains the copy's
    second face; the copy is dropped.
    """
    graph = decoded.graph
    edge_level = decoded.level_of_edge()
    used = set()
    merged: List[Tuple[int, int]] = []
    unmatched: List[int] = []
    new_ends: Dict[int, Tuple[int, int]] = {}

    for edge_id, edge in enumerate(graph.edges):
        if not edge.is_dangling:
            continue
        known = edge.face_b if edge.face_a == UNASSIGNED else edge.face_a
        signature = (quantize_box(edge.box), edge.code)
        match = None
        for candidate_id, candidate in enumerate(graph.edges):
            if (
                candidate_id in used
                or candidate.is_dangling
                or edge_level[candidate_id] <= edge_level[edge_id]
                or known not in candidate.faces
                or (quantize_box(candidate.box), candidate.code) != signature
            ):
                continue
            match = candidate_id
            break
        if match is None:
            unmatched.append(edge_id)
            continue
        used.add(match)
        merged.append((edge_id, match))
        new_ends[edge_id] = (known, graph.edges[match].other(known))

    if not merged:
        edges = graph.edges
    else:
        edges = tuple(
            replace(edge, face_a=new_ends[i][0], face_b=new_ends[i][1]) if i in new_ends else edge
            for i, edge in enumerate(graph.edges)
            if i not in used
        )
    # T_u edges precede every dropped copy, so their ids are unchanged
    resolved = BRepGraph(tuple(graph.faces), tuple(edges), graph.has_orientation)
    if unmatched:
        logger.warning("%d unassigned edge(s) left dangling", len(unmatched))
    return UnassignedResolution(resolved, tuple(merged), tuple(unmatched))
