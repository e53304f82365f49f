"""
Face adjacency multigraph of a B-Rep solid.

Faces are nodes, B-Rep edges are connections between two faces. Two distinct
edges may join the same pair of faces. An edge whose second face is not yet
known (autocomplete conditioning) carries ``UNASSIGNED`` as that endpoint.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field, replace
from typing import Callable, Dict, Iterable, List, Optional, Sequence, Tuple

import numpy as np

from app.core.errors import ContractViolationError, TopologyError
from app.geometry.canonical import UnitCubeTransform
from app.geometry.grids import Aabb, EdgeGrid, FaceGrid, compute_aabb
from app.geometry.transforms import rotate_points

UNASSIGNED = -1

FacePair = Tuple[int, int]


@dataclass(frozen=True)
class FaceRecord:
    """A face grid with its placement box.

    ``code`` holds the latent codebook indices when the face came out of a
    decoder, so re-tokenizing reproduces the same geometry tokens.
    """

    grid: FaceGrid
    box: Optional[Aabb] = None
    code: Optional[Tuple[int, ...]] = None

    def __post_init__(self) -> None:
        if self.box is None:
            object.__setattr__(self, "box", compute_aabb(self.grid))


@dataclass(frozen=True)
class EdgeRecord:
    grid: EdgeGrid
    face_a: int
    face_b: int
    box: Optional[Aabb] = None
    code: Optional[Tuple[int, ...]] = None

    def __post_init__(self) -> None:
        if self.box is None:
            object.__setattr__(self, "box", compute_aabb(self.grid))

    @property
    def faces(self) -> FacePair:
        return (self.face_a, self.face_b)

    @property
    def is_dangling(self) -> bool:
        return UNASSIGNED in self.faces

    def other(self, face_id: int) -> int:
        if face_id == self.face_a:
            return self.face_b
        if face_id == self.face_b:
            return self.face_a
        raise ContractViolationError(f"face {face_id} is not an endpoint of this edge")


@dataclass(frozen=True)
class BRepGraph:
    faces: Tuple[FaceRecord, ...]
    edges: Tuple[EdgeRecord, ...] = ()
    has_orientation: bool = True
    _adjacency: Tuple[Tuple[int, ...], ...] = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        object.__setattr__(self, "faces", tuple(self.faces))
        object.__setattr__(self, "edges", tuple(self.edges))
        incident: List[List[int]] = [[] for _ in self.faces]
        for edge_id, edge in enumerate(self.edges):
            if edge.face_a == edge.face_b:
                raise TopologyError(
                    f"edge {edge_id} joins face {edge.face_a} to itself", edge=edge_id
                )
            for face_id in edge.faces:
                if face_id == UNASSIGNED:
                    continue
                if not 0 <= face_id < len(self.faces):
                    raise TopologyError(
                        f"edge {edge_id} references missing face {face_id}",
                        edge=edge_id,
                        face=face_id,
                    )
                incident[face_id].append(edge_id)
        object.__setattr__(self, "_adjacency", tuple(tuple(ids) for ids in incident))

    @property
    def num_faces(self) -> int:
        return len(self.faces)

    @property
    def num_edges(self) -> int:
        return len(self.edges)

    def incident_edges(self, face_id: int) -> Tuple[int, ...]:
        return self._adjacency[face_id]

    def neighbours(self, face_id: int) -> List[int]:
        """Distinct assigned neighbour faces, ascending."""
        others = {self.edges[e].other(face_id) for e in self.incident_edges(face_id)}
        others.discard(UNASSIGNED)
        return sorted(others)

    def dangling_edges(self) -> List[int]:
        return [i for i, edge in enumerate(self.edges) if edge.is_dangling]

    def face_pairs(self) -> Counter:
        """Multiset of unordered face pairs, one entry per edge."""
        return Counter(tuple(sorted(edge.faces)) for edge in self.edges)

    def bounding_box(self) -> Aabb:
        return Aabb.union([face.box for face in self.faces])

    def map_points(self, fn: Callable[[np.ndarray], np.ndarray]) -> "BRepGraph":
        """Apply ``fn`` to every grid; boxes are recomputed and cached codes dropped."""
        faces = [
            FaceRecord(FaceGrid(fn(face.grid.points), face.grid.orientation_out))
            for face in self.faces
        ]
        edges = [
            EdgeRecord(EdgeGrid(fn(edge.grid.points)), edge.face_a, edge.face_b)
            for edge in self.edges
        ]
        return BRepGraph(tuple(faces), tuple(edges), self.has_orientation)


def normalize_graph(graph: BRepGraph) -> Tuple[BRepGraph, UnitCubeTransform]:
    """Scale the whole solid into [-1, 1]^3; returns the graph and the transform used."""
    transform = UnitCubeTransform(graph.bounding_box())
    return graph.map_points(transform.apply), transform


def rotate_graph(graph: BRepGraph, axis: str, quarter_turns: int) -> BRepGraph:
    """Rotate every grid by a multiple of 90 degrees about ``axis``."""
    return graph.map_points(lambda points: rotate_points(points, axis, quarter_turns))


def extract_user_graph(graph: BRepGraph, face_ids: Iterable[int]) -> BRepGraph:
    """Sub-graph on ``face_ids`` used as autocomplete conditioning.

    Faces are re-indexed in ascending original id order. Edges with both ends
    selected are kept, edges with one end selected become dangling, the rest
    are dropped.
    """
    selected = sorted(set(face_ids))
    if not selected:
        raise ContractViolationError("user face set is empty")
    for face_id in selected:
        if not 0 <= face_id < graph.num_faces:
            raise ContractViolationError(f"user face {face_id} does not exist", face=face_id)
    remap: Dict[int, int] = {old: new for new, old in enumerate(selected)}
    edges = []
    for edge in graph.edges:
        a = remap.get(edge.face_a, UNASSIGNED)
        b = remap.get(edge.face_b, UNASSIGNED)
        if a == UNASSIGNED and b == UNASSIGNED:
            continue
        edges.append(replace(edge, face_a=a, face_b=b))
    faces = [graph.faces[i] for i in selected]
    return BRepGraph(tuple(faces), tuple(edges), graph.has_orientation)


def build_graph(
    faces: Sequence[FaceGrid],
    edges: Sequence[Tuple[EdgeGrid, int, int]],
    has_orientation: bool = True,
) -> BRepGraph:
    """Convenience constructor from bare grids and endpoint pairs."""
    return BRepGraph(
        tuple(FaceRecord(grid) for grid in faces),
        tuple(EdgeRecord(grid, a, b) for grid, a, b in edges),
        has_orientation,
    )
