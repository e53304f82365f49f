"""
Breadth-first traversal of the face adjacency graph into ordered levels.

Faces within a level are sorted by the coordinate bins of their bounding box,
taken in the unit-cube frame of the solid when it does not lie there already.
The start face is the bottom-leftmost one by its continuous bounding box.
Each edge is emitted once, grouped under whichever of its two faces is
visited later, so it always points back at a face the decoder has already
seen.

The coordinate ordering skips the traversal and emits every face in a single
level sorted by the same box key.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from enum import Enum
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

import numpy as np

from app.core.errors import ContractViolationError, UnreachableFacesError
from app.geometry.canonical import UnitCubeTransform
from app.geometry.grids import Aabb, quantize_box
from app.topology.graph import UNASSIGNED, BRepGraph

logger = logging.getLogger(__name__)


class FaceOrdering(str, Enum):
    """How faces are laid out in the stream.

    BFT emits breadth-first levels from the start face. COORD emits every face
    in one level sorted by its bounding box, without following adjacency.
    """

    BFT = "bft"
    COORD = "coord"


@dataclass(frozen=True)
class EdgeEntry:
    """One edge inside a face block.

    ``ref_face`` is the other endpoint (``UNASSIGNED`` for dangling edges,
    ``None`` when the entry was parsed and not resolved yet). ``tag`` is the
    window-relative reference once tags are assigned, ``UNASSIGNED`` for T_u.
    """

    edge_id: int
    ref_face: Optional[int] = None
    tag: Optional[int] = None


@dataclass(frozen=True)
class FaceEntry:
    face_id: int
    edges: Tuple[EdgeEntry, ...] = ()


@dataclass(frozen=True)
class TraversalPlan:
    levels: Tuple[Tuple[FaceEntry, ...], ...]
    stride: str = "1"
    # face ids in each level's reference window, in tag order
    windows: Tuple[Tuple[int, ...], ...] = field(default=())

    @property
    def face_order(self) -> List[int]:
        return [entry.face_id for level in self.levels for entry in level]

    @property
    def num_faces(self) -> int:
        return sum(len(level) for level in self.levels)

    @property
    def num_edges(self) -> int:
        return sum(len(entry.edges) for level in self.levels for entry in level)

    def edge_entries(self) -> Iterable[Tuple[int, FaceEntry, EdgeEntry]]:
        """Yield ``(level, face_entry, edge_entry)`` in stream order."""
        for level_index, level in enumerate(self.levels):
            for entry in level:
                for edge in entry.edges:
                    yield level_index, entry, edge


def ordering_frame(graph: BRepGraph) -> Optional[UnitCubeTransform]:
    """Transform placing ``graph`` in the unit cube, or ``None`` when it already lies there."""
    box = graph.bounding_box()
    if min(box.min_corner) >= -1.0 and max(box.max_corner) <= 1.0:
        return None
    return UnitCubeTransform(box)


def box_bins(box: Aabb, frame: Optional[UnitCubeTransform] = None) -> Tuple[int, ...]:
    """Coordinate bins of ``box`` after mapping it through ``frame``."""
    if frame is not None:
        lo, hi = frame.apply(np.array([box.min_corner, box.max_corner]))
        box = Aabb(tuple(lo), tuple(hi))
    return quantize_box(box)


def start_face_key(graph: BRepGraph, face_id: int) -> Tuple:
    """Bottom-leftmost ordering on the continuous box: min z, y, x then max z, y, x, then id."""
    x0, y0, z0 = graph.faces[face_id].box.min_corner
    x1, y1, z1 = graph.faces[face_id].box.max_corner
    return (z0, y0, x0, z1, y1, x1, face_id)


def level_sort_key(
    graph: BRepGraph, face_id: int, frame: Optional[UnitCubeTransform] = None
) -> Tuple:
    """Coordinate bins in ``frame``, then the continuous box, then id.

    Decoded graphs carry bin-center boxes, so re-traversing one reproduces
    its stream order.
    """
    box = graph.faces[face_id].box
    return box_bins(box, frame) + box.min_corner + box.max_corner + (face_id,)


def pick_start_face(graph: BRepGraph) -> int:
    if graph.num_faces == 0:
        raise ContractViolationError("cannot pick a start face of an empty graph")
    return min(range(graph.num_faces), key=lambda f: start_face_key(graph, f))


def _levels_by_bfs(
    graph: BRepGraph, start: Sequence[int], frame: Optional[UnitCubeTransform]
) -> List[List[int]]:
    visited = set(start)
    levels = [sorted(set(start), key=lambda f: level_sort_key(graph, f, frame))]
    while True:
        frontier = set()
        for face_id in levels[-1]:
            for neighbour in graph.neighbours(face_id):
                if neighbour not in visited:
                    frontier.add(neighbour)
        if not frontier:
            break
        visited |= frontier
        levels.append(sorted(frontier, key=lambda f: level_sort_key(graph, f, frame)))
    orphans = set(range(graph.num_faces)) - visited
    if orphans:
        raise UnreachableFacesError(orphans)
    return levels


def bft_levels(graph: BRepGraph, start: Optional[Sequence[int]] = None) -> TraversalPlan:
    """Traverse ``graph`` level by level from ``start`` (default: the start face)."""
    if graph.num_faces == 0:
        raise ContractViolationError("cannot traverse an empty graph")
    start = [pick_start_face(graph)] if start is None else list(start)
    if not start:
        raise ContractViolationError("start face set is empty")
    for face_id in start:
        if not 0 <= face_id < graph.num_faces:
            raise ContractViolationError(f"start face {face_id} does not exist", face=face_id)

    frame = ordering_frame(graph)
    return _plan_levels(graph, _levels_by_bfs(graph, start, frame), frame)


def coord_levels(graph: BRepGraph) -> TraversalPlan:
    """All faces in a single level, sorted by their bounding boxes."""
    if graph.num_faces == 0:
        raise ContractViolationError("cannot traverse an empty graph")
    frame = ordering_frame(graph)
    order = sorted(range(graph.num_faces), key=lambda f: level_sort_key(graph, f, frame))
    return _plan_levels(graph, [order], frame)


def traverse(graph: BRepGraph, ordering: FaceOrdering = FaceOrdering.BFT) -> TraversalPlan:
    if FaceOrdering(ordering) is FaceOrdering.COORD:
        return coord_levels(graph)
    return bft_levels(graph)


def _plan_levels(
    graph: BRepGraph, levels: List[List[int]], frame: Optional[UnitCubeTransform]
) -> TraversalPlan:
    position = {face: i for i, face in enumerate(f for level in levels for f in level)}

    grouped: Dict[int, List[Tuple[Tuple, EdgeEntry]]] = {face: [] for face in position}
    for edge_id, edge in enumerate(graph.edges):
        if edge.is_dangling:
            owner = edge.face_b if edge.face_a == UNASSIGNED else edge.face_a
            ref = UNASSIGNED
            rank = len(position)
        else:
            owner, ref = sorted(edge.faces, key=position.__getitem__, reverse=True)
            rank = position[ref]
        key = (rank, box_bins(edge.box, frame), edge_id)
        grouped[owner].append((key, EdgeEntry(edge_id=edge_id, ref_face=ref)))

    plan_levels = tuple(
        tuple(
            FaceEntry(face, tuple(entry for _, entry in sorted(grouped[face], key=lambda x: x[0])))
            for face in level
        )
        for level in levels
    )
    logger.debug(
        "traversed %d faces into %d levels", graph.num_faces, len(plan_levels)
    )
    return TraversalPlan(levels=plan_levels)
