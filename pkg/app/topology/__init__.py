"""
Topology: face adjacency graph, breadth-first traversal and reference windows.
"""

from .graph import (
    UNASSIGNED,
    BRepGraph,
    EdgeRecord,
    FaceRecord,
    build_graph,
    extract_user_graph,
    normalize_graph,
    rotate_graph,
)
from .traversal import (
    EdgeEntry,
    FaceEntry,
    FaceOrdering,
    TraversalPlan,
    bft_levels,
    box_bins,
    coord_levels,
    level_sort_key,
    ordering_frame,
    pick_start_face,
    start_face_key,
    traverse,
)
from .references import (
    WINDOW_CAPACITY,
    ReferenceWindow,
    WindowStride,
    assign_window_tags,
    resolve_tags,
)

__all__ = [
    "UNASSIGNED",
    "BRepGraph",
    "EdgeRecord",
    "FaceRecord",
    "build_graph",
    "extract_user_graph",
    "normalize_graph",
    "rotate_graph",
    "EdgeEntry",
    "FaceEntry",
    "FaceOrdering",
    "TraversalPlan",
    "bft_levels",
    "box_bins",
    "coord_levels",
    "level_sort_key",
    "ordering_frame",
    "pick_start_face",
    "start_face_key",
    "traverse",
    "WINDOW_CAPACITY",
    "ReferenceWindow",
    "WindowStride",
    "assign_window_tags",
    "resolve_tags",
]
