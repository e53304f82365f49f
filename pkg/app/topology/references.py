"""
Local topological references.

Edges never name faces by global id. They name a face by its tag inside a
sliding reference window that holds the previous BFT level plus the faces of
the current level visited so far. The window is rebuilt whenever the
traversal advances by its stride.
"""

from __future__ import annotations

from dataclasses import replace
from enum import Enum
from typing import Dict, List, Sequence, Tuple

from app.core.errors import (
    ContractViolationError,
    DanglingReferenceError,
    ModeError,
    WindowCapacityError,
)
from app.topology.graph import UNASSIGNED, FacePair
from app.topology.traversal import FaceEntry, TraversalPlan

WINDOW_CAPACITY = 200


class WindowStride(str, Enum):
    """How often the reference window is reset.

    ONE resets at every level, TWO at every second level, GLOBAL never (tags
    become global face positions).
    """

    ONE = "1"
    TWO = "2"
    GLOBAL = "global"

    def resets_at(self, level: int) -> bool:
        if self is WindowStride.ONE:
            return True
        if self is WindowStride.TWO:
            return level % 2 == 0
        return False


class ReferenceWindow:
    """Ordered set of faces addressable by tag."""

    def __init__(self, stride: WindowStride = WindowStride.ONE, capacity: int = WINDOW_CAPACITY) -> None:
        self.stride = WindowStride(stride)
        self.capacity = capacity
        self._faces: List[int] = []
        self._tags: Dict[int, int] = {}

    def __len__(self) -> int:
        return len(self._faces)

    @property
    def faces(self) -> Tuple[int, ...]:
        return tuple(self._faces)

    def _reset(self, faces: Sequence[int]) -> None:
        self._faces = []
        self._tags = {}
        for face in faces:
            self.push(face)

    def begin_level(self, level: int, previous_level: Sequence[int]) -> None:
        if level == 0:
            self._reset(())
        elif self.stride.resets_at(level):
            self._reset(previous_level)

    def push(self, face_id: int) -> int:
        if len(self._faces) >= self.capacity:
            raise WindowCapacityError(
                f"reference window exceeds {self.capacity} faces",
                capacity=self.capacity,
                face=face_id,
            )
        self._tags[face_id] = len(self._faces)
        self._faces.append(face_id)
        return self._tags[face_id]

    def tag_of(self, face_id: int) -> int:
        try:
            return self._tags[face_id]
        except KeyError:
            raise DanglingReferenceError(
                f"face {face_id} is outside the reference window", face=face_id
            ) from None

    def face_at(self, tag: int, limit: int) -> int:
        """Face behind ``tag``; only tags below ``limit`` are addressable."""
        if not 0 <= tag < min(limit, len(self._faces)):
            raise DanglingReferenceError(
                f"reference T{tag} outside a window of {limit} faces",
                tag=tag,
                window=limit,
            )
        return self._faces[tag]


def assign_window_tags(plan: TraversalPlan, stride: WindowStride = WindowStride.ONE) -> TraversalPlan:
    """Fill every edge entry's ``tag`` under the window rule for ``stride``."""
    stride = WindowStride(stride)
    window = ReferenceWindow(stride)
    previous: List[int] = []
    levels = []
    windows = []
    for level_index, level in enumerate(plan.levels):
        window.begin_level(level_index, previous)
        entries = []
        for entry in level:
            current = window.push(entry.face_id)
            edges = []
            for edge in entry.edges:
                if edge.ref_face is None:
                    raise ContractViolationError(
                        f"edge {edge.edge_id} has no referenced face", edge=edge.edge_id
                    )
                if edge.ref_face == UNASSIGNED:
                    tag = UNASSIGNED
                else:
                    tag = window.tag_of(edge.ref_face)
                    if tag >= current:
                        raise DanglingReferenceError(
                            f"edge {edge.edge_id} references face {edge.ref_face} visited after its owner",
                            edge=edge.edge_id,
                        )
                edges.append(replace(edge, tag=tag))
            entries.append(FaceEntry(entry.face_id, tuple(edges)))
        levels.append(tuple(entries))
        windows.append(window.faces)
        previous = [entry.face_id for entry in level]
    return TraversalPlan(levels=tuple(levels), stride=stride.value, windows=tuple(windows))


def resolve_tags(
    plan: TraversalPlan,
    stride: WindowStride = WindowStride.ONE,
    autocomplete: bool = False,
) -> Dict[int, FacePair]:
    """Recover ``edge id -> (owner face, referenced face)`` from tags alone.

    The owner is the face whose block contains the edge; the referenced face
    is looked up in the window active at that point of the stream.
    """
    stride = WindowStride(stride)
    window = ReferenceWindow(stride)
    previous: List[int] = []
    incidence: Dict[int, FacePair] = {}
    for level_index, level in enumerate(plan.levels):
        window.begin_level(level_index, previous)
        for entry in level:
            current = window.push(entry.face_id)
            for edge in entry.edges:
                if edge.tag is None:
                    raise ContractViolationError(f"edge {edge.edge_id} has no tag", edge=edge.edge_id)
                if edge.tag == UNASSIGNED:
                    if not autocomplete:
                        raise ModeError(
                            "unassigned reference outside autocomplete mode", edge=edge.edge_id
                        )
                    incidence[edge.edge_id] = (entry.face_id, UNASSIGNED)
                    continue
                try:
                    other = window.face_at(edge.tag, current)
                except DanglingReferenceError as exc:
                    raise DanglingReferenceError(exc.message, edge=edge.edge_id, **exc.details) from None
                incidence[edge.edge_id] = (entry.face_id, other)
        previous = [entry.face_id for entry in level]
    return incidence
