"""Shared solids, builders and expected values for the test suite."""

from dataclasses import replace

import numpy as np

from app.corpus.generators import gen_box, gen_cylinder, gen_plate_with_holes, gen_prism
from app.schema.document import BRepDocument
from app.topology.graph import UNASSIGNED, BRepGraph, normalize_graph

GAP_TOLERANCE = 2.0 / 1024

# Two-seam cylinder from gen_cylinder(): bottom cap, two half-cylinders, top cap.
CYLINDER_LEVELS = [[0], [1, 2], [3]]
CYLINDER_TOKENS = 105
CYLINDER_TOKENS_WITH_META = 108
# edge ids in stream order and the tags they carry under a stride-one window
CYLINDER_EDGE_ORDER = [0, 1, 3, 2, 4, 5]
CYLINDER_REF_TAGS = [0, 0, 1, 1, 0, 1]
CYLINDER_WINDOWS = ((0,), (0, 1, 2), (1, 2, 3))

# box faces: bottom, top, front, back, left, right
BOX_USER_FACES = [0, 2]

PLATE_HOLES = [(1.0, 1.0, 0.4), (3.0, 1.0, 0.3)]
PLATE_SIZE = (4.0, 2.0, 0.5)
PLATE_WALLS = [6, 7, 8, 9]


def box_graph(**kwargs) -> BRepGraph:
    return gen_box(**kwargs).to_graph()


def cylinder_graph(normalized: bool = True) -> BRepGraph:
    graph = gen_cylinder().to_graph()
    if normalized:
        graph, _ = normalize_graph(graph)
    return graph


def prism_graph(sides: int = 6, **kwargs) -> BRepGraph:
    return gen_prism(sides=sides, **kwargs).to_graph()


def plate_document(**kwargs) -> BRepDocument:
    return gen_plate_with_holes(holes=PLATE_HOLES, size=PLATE_SIZE, **kwargs)


def shifted_face(document: BRepDocument, face_id: int, offset) -> BRepDocument:
    """Copy of ``document`` with one face translated by ``offset``."""
    faces = list(document.faces)
    moved = np.asarray(faces[face_id].points) + np.asarray(offset, dtype=np.float64)
    faces[face_id] = faces[face_id].model_copy(update={"points": moved.tolist()})
    return document.model_copy(update={"faces": faces})


def random_cloud(n: int, seed: int, scale: float = 1.0) -> np.ndarray:
    return np.random.default_rng(seed).uniform(-scale, scale, size=(n, 3))


def permuted_faces(graph: BRepGraph, order) -> BRepGraph:
    """Copy of ``graph`` whose face ``i`` is the input's face ``order[i]``."""
    new_id = {old: new for new, old in enumerate(order)}
    new_id[UNASSIGNED] = UNASSIGNED
    faces = [graph.faces[old] for old in order]
    edges = [
        replace(edge, face_a=new_id[edge.face_a], face_b=new_id[edge.face_b]) for edge in graph.edges
    ]
    return BRepGraph(tuple(faces), tuple(edges), has_orientation=graph.has_orientation)
