"""
Synthetic solids with exact analytic point grids and constraint labels.

Every generator returns a watertight BRepDocument. Periodic surfaces are
split along seam edges, so a cylinder yields two half-cylinder faces joined
by two seam edges. Planar faces are sampled over the bounding rectangle of
their trimmed region, which contains every boundary edge.
"""

from __future__ import annotations

import math
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from app.core.errors import GeneratorError
from app.geometry.grids import GRID_SIZE
from app.schema.document import BRepDocument, EdgeDocument, FaceDocument, Labels
from app.tokens.vocabulary import Complexity

PARAM = np.linspace(0.0, 1.0, GRID_SIZE)
HULL_ANGLE_TOLERANCE = 1e-9
ALIGNED_HOLE_TILT_DEG = 5.0

Vector = Sequence[float]
HoleSpec = Tuple[float, float, float]  # centre x, centre y, radius


def _orientation_out(points: np.ndarray, outward: Vector) -> bool:
    mid = GRID_SIZE // 2
    du = points[mid + 1, mid] - points[mid - 1, mid]
    dv = points[mid, mid + 1] - points[mid, mid - 1]
    return float(np.dot(np.cross(du, dv), outward)) > 0.0


def plane_patch(origin: Vector, a: Vector, b: Vector) -> np.ndarray:
    """Grid ``origin + u a + v b`` over the unit parameter square."""
    u, v = np.meshgrid(PARAM, PARAM, indexing="ij")
    return (
        np.asarray(origin, dtype=np.float64)
        + u[..., np.newaxis] * np.asarray(a, dtype=np.float64)
        + v[..., np.newaxis] * np.asarray(b, dtype=np.float64)
    )


def segment(p0: Vector, p1: Vector) -> np.ndarray:
    p0 = np.asarray(p0, dtype=np.float64)
    return p0 + PARAM[:, np.newaxis] * (np.asarray(p1, dtype=np.float64) - p0)


class SolidBuilder:
    """Collects faces and edges in id order."""

    def __init__(self) -> None:
        self.faces: List[FaceDocument] = []
        self.edges: List[EdgeDocument] = []

    def add_face(self, points: np.ndarray, outward: Vector) -> int:
        self.faces.append(FaceDocument(
            points=points.tolist(),
            orientation_out=_orientation_out(points, outward),
        ))
        return len(self.faces) - 1

    def add_edge(self, points: np.ndarray, face_a: int, face_b: int) -> int:
        self.edges.append(EdgeDocument(points=points.tolist(), faces=(face_a, face_b)))
        return len(self.edges) - 1

    def flip_orientation(self, face_id: int) -> None:
        face = self.faces[face_id]
        self.faces[face_id] = face.model_copy(update={"orientation_out": not face.orientation_out})

    def document(
        self,
        hull_planes: Sequence[int] = (),
        bolt_holes: Sequence[int] = (),
    ) -> BRepDocument:
        return BRepDocument(
            faces=self.faces,
            edges=self.edges,
            labels=Labels(
                hull_planes=sorted(hull_planes),
                bolt_holes=sorted(bolt_holes),
                complexity=Complexity.from_face_count(len(self.faces)).value,
            ),
        )


def _check_positive(**dims: float) -> None:
    for name, value in dims.items():
        if not value > 0:
            raise GeneratorError(f"{name} must be positive", **{name: value})


def add_box(builder: SolidBuilder, lo: Vector, hi: Vector) -> Dict[str, int]:
    """Add the six faces and twelve edges of an axis-aligned box."""
    x0, y0, z0 = lo
    x1, y1, z1 = hi
    sx, sy, sz = x1 - x0, y1 - y0, z1 - z0
    faces = {
        "bottom": builder.add_face(plane_patch((x0, y0, z0), (sx, 0, 0), (0, sy, 0)), (0, 0, -1)),
        "top": builder.add_face(plane_patch((x0, y0, z1), (sx, 0, 0), (0, sy, 0)), (0, 0, 1)),
        "front": builder.add_face(plane_patch((x0, y0, z0), (sx, 0, 0), (0, 0, sz)), (0, -1, 0)),
        "back": builder.add_face(plane_patch((x0, y1, z0), (sx, 0, 0), (0, 0, sz)), (0, 1, 0)),
        "left": builder.add_face(plane_patch((x0, y0, z0), (0, sy, 0), (0, 0, sz)), (-1, 0, 0)),
        "right": builder.add_face(plane_patch((x1, y0, z0), (0, sy, 0), (0, 0, sz)), (1, 0, 0)),
    }
    for cap, z in (("bottom", z0), ("top", z1)):
        builder.add_edge(segment((x0, y0, z), (x1, y0, z)), faces["front"], faces[cap])
        builder.add_edge(segment((x0, y1, z), (x1, y1, z)), faces["back"], faces[cap])
        builder.add_edge(segment((x0, y0, z), (x0, y1, z)), faces["left"], faces[cap])
        builder.add_edge(segment((x1, y0, z), (x1, y1, z)), faces["right"], faces[cap])
    for side, y in (("front", y0), ("back", y1)):
        builder.add_edge(segment((x0, y, z0), (x0, y, z1)), faces["left"], faces[side])
        builder.add_edge(segment((x1, y, z0), (x1, y, z1)), faces["right"], faces[side])
    return faces


def gen_box(
    size: Vector = (1.0, 1.0, 1.0),
    center: Vector = (0.0, 0.0, 0.0),
) -> BRepDocument:
    """Axis-aligned box: 6 faces, 12 edges, every face a hull plane."""
    sx, sy, sz = (float(s) for s in size)
    _check_positive(width=sx, depth=sy, height=sz)
    c = np.asarray(center, dtype=np.float64)
    half = np.array([sx, sy, sz]) / 2.0
    builder = SolidBuilder()
    faces = add_box(builder, c - half, c + half)
    return builder.document(hull_planes=faces.values())


def _axis_aligned(angle: float) -> bool:
    return (
        abs(abs(math.cos(angle)) - 1.0) < HULL_ANGLE_TOLERANCE
        or abs(abs(math.sin(angle)) - 1.0) < HULL_ANGLE_TOLERANCE
    )


def gen_prism(
    sides: int = 6,
    radius: float = 1.0,
    height: float = 1.0,
    phase: float = 0.0,
    center: Vector = (0.0, 0.0, 0.0),
) -> BRepDocument:
    """Right prism over a regular polygon: ``sides + 2`` faces, ``3 sides`` edges.

    ``phase`` rotates the polygon; a side is a hull plane exactly when its
    outward normal is axis aligned.
    """
    if sides < 3:
        raise GeneratorError("a prism needs at least 3 sides", sides=sides)
    _check_positive(radius=radius, height=height)
    cx, cy, cz = (float(v) for v in center)
    angles = phase + 2.0 * np.pi * np.arange(sides) / sides
    ring = np.stack([cx + radius * np.cos(angles), cy + radius * np.sin(angles)], axis=1)
    lo, hi = ring.min(axis=0), ring.max(axis=0)
    extent = (hi[0] - lo[0], hi[1] - lo[1])

    builder = SolidBuilder()
    bottom = builder.add_face(plane_patch((lo[0], lo[1], cz), (extent[0], 0, 0), (0, extent[1], 0)), (0, 0, -1))
    top = builder.add_face(plane_patch((lo[0], lo[1], cz + height), (extent[0], 0, 0), (0, extent[1], 0)), (0, 0, 1))
    hull = [bottom, top]
    side_faces = []
    for k in range(sides):
        p0 = (ring[k, 0], ring[k, 1], cz)
        p1 = (ring[(k + 1) % sides, 0], ring[(k + 1) % sides, 1], cz)
        normal_angle = phase + 2.0 * np.pi * (k + 0.5) / sides
        outward = (math.cos(normal_angle), math.sin(normal_angle), 0.0)
        face = builder.add_face(plane_patch(p0, np.subtract(p1, p0), (0, 0, height)), outward)
        side_faces.append(face)
        if _axis_aligned(normal_angle):
            hull.append(face)
    for k in range(sides):
        p0 = np.array([ring[k, 0], ring[k, 1], cz])
        p1 = np.array([ring[(k + 1) % sides, 0], ring[(k + 1) % sides, 1], cz])
        lift = np.array([0.0, 0.0, height])
        builder.add_edge(segment(p0, p1), side_faces[k], bottom)
        builder.add_edge(segment(p0 + lift, p1 + lift), side_faces[k], top)
        builder.add_edge(segment(p1, p1 + lift), side_faces[(k + 1) % sides], side_faces[k])
    return builder.document(hull_planes=hull)


def _arc(cx: float, cy: float, z: float, radius: float, start: float) -> np.ndarray:
    theta = start + np.pi * PARAM
    return np.stack([cx + radius * np.cos(theta), cy + radius * np.sin(theta), np.full(GRID_SIZE, z)], axis=1)


def _half_cylinder(cx: float, cy: float, z: float, radius: float, height: float, start: float) -> np.ndarray:
    theta = start + np.pi * PARAM
    u, v = np.meshgrid(theta, PARAM, indexing="ij")
    return np.stack([cx + radius * np.cos(u), cy + radius * np.sin(u), z + height * v], axis=-1)


def gen_cylinder(
    radius: float = 1.0,
    height: float = 2.0,
    base: Vector = (0.0, 0.0, 0.0),
) -> BRepDocument:
    """Vertical cylinder split along two seams: 4 faces, 6 edges.

    Face 0 is the bottom cap, faces 1 and 2 the half-cylinders on the -y and
    +y sides, face 3 the top cap. Edges are, in order: bottom arcs of faces 1
    and 2, the seams at theta = 0 and theta = pi, then the top arcs.
    """
    _check_positive(radius=radius, height=height)
    cx, cy, cz = (float(v) for v in base)
    side = 2.0 * radius
    builder = SolidBuilder()
    bottom = builder.add_face(plane_patch((cx - radius, cy - radius, cz), (side, 0, 0), (0, side, 0)), (0, 0, -1))
    lower = builder.add_face(_half_cylinder(cx, cy, cz, radius, height, np.pi), (0, -1, 0))
    upper = builder.add_face(_half_cylinder(cx, cy, cz, radius, height, 0.0), (0, 1, 0))
    top = builder.add_face(
        plane_patch((cx - radius, cy - radius, cz + height), (side, 0, 0), (0, side, 0)), (0, 0, 1)
    )
    builder.add_edge(_arc(cx, cy, cz, radius, np.pi), lower, bottom)
    builder.add_edge(_arc(cx, cy, cz, radius, 0.0), upper, bottom)
    builder.add_edge(segment((cx + radius, cy, cz), (cx + radius, cy, cz + height)), upper, lower)
    builder.add_edge(segment((cx - radius, cy, cz), (cx - radius, cy, cz + height)), upper, lower)
    builder.add_edge(_arc(cx, cy, cz + height, radius, np.pi), top, lower)
    builder.add_edge(_arc(cx, cy, cz + height, radius, 0.0), top, upper)
    return builder.document(hull_planes=(bottom, top))


class _TiltedBore:
    """Cylinder through the slab ``0 <= z <= thickness`` with axis tilted about x."""

    def __init__(self, cx: float, cy: float, radius: float, thickness: float, tilt: float) -> None:
        self.origin = np.array([cx, cy, 0.0])
        self.radius = radius
        self.thickness = thickness
        self.axis = np.array([0.0, math.sin(tilt), math.cos(tilt)])
        self.e1 = np.array([1.0, 0.0, 0.0])
        self.e2 = np.cross(self.axis, self.e1)

    def _ring(self, theta: np.ndarray) -> np.ndarray:
        return self.origin + self.radius * (
            np.cos(theta)[..., np.newaxis] * self.e1 + np.sin(theta)[..., np.newaxis] * self.e2
        )

    def _axial(self, ring: np.ndarray, z: float) -> np.ndarray:
        return (z - ring[..., 2]) / self.axis[2]

    def wall(self, start: float) -> np.ndarray:
        theta = start + np.pi * PARAM
        ring = self._ring(theta)
        s0 = self._axial(ring, 0.0)
        s1 = self._axial(ring, self.thickness)
        s = s0[:, np.newaxis] + PARAM[np.newaxis, :] * (s1 - s0)[:, np.newaxis]
        return ring[:, np.newaxis, :] + s[..., np.newaxis] * self.axis

    def rim(self, start: float, z: float) -> np.ndarray:
        ring = self._ring(start + np.pi * PARAM)
        return ring + self._axial(ring, z)[:, np.newaxis] * self.axis

    def seam(self, theta: float) -> np.ndarray:
        ring = self._ring(np.array([theta]))[0]
        return segment(
            ring + self._axial(ring, 0.0) * self.axis,
            ring + self._axial(ring, self.thickness) * self.axis,
        )

    def radial(self, theta: float) -> np.ndarray:
        return math.cos(theta) * self.e1 + math.sin(theta) * self.e2


def _check_hole_layout(holes: Sequence[HoleSpec], size: Tuple[float, float, float], tilt: float) -> None:
    width, depth, thickness = size
    drift = thickness * math.tan(tilt)
    stretch = 1.0 / math.cos(tilt)
    for i, (cx, cy, r) in enumerate(holes):
        _check_positive(radius=r)
        margin = 0.05 * r
        ys = (cy - r * stretch, cy + r * stretch, cy + drift - r * stretch, cy + drift + r * stretch)
        if cx - r - margin < 0 or cx + r + margin > width or min(ys) - margin < 0 or max(ys) + margin > depth:
            raise GeneratorError("hole does not fit inside the plate", hole=i)
        for j in range(i):
            ox, oy, orad = holes[j]
            if math.hypot(cx - ox, cy - oy) < (r + orad) * stretch + margin:
                raise GeneratorError("holes overlap", hole=i, other=j)


def random_hole_layout(
    count: int,
    rng: np.random.Generator,
    cell: float = 1.0,
) -> Tuple[List[HoleSpec], Tuple[float, float]]:
    """Place ``count`` holes in distinct cells of a square-ish grid."""
    cols = max(1, math.ceil(math.sqrt(count)))
    rows = max(1, math.ceil(count / cols))
    cells = rng.choice(cols * rows, size=count, replace=False)
    holes = []
    for index in sorted(int(c) for c in cells):
        row, col = divmod(index, cols)
        radius = cell * rng.uniform(0.15, 0.3)
        slack = cell / 2.0 - radius * 1.2
        cx = (col + 0.5) * cell + rng.uniform(-0.5, 0.5) * slack
        cy = (row + 0.5) * cell + rng.uniform(-0.5, 0.5) * slack
        holes.append((cx, cy, radius))
    return holes, (cols * cell, rows * cell)


def gen_plate_with_holes(
    holes: Optional[Sequence[HoleSpec]] = None,
    count: int = 1,
    size: Optional[Tuple[float, float, float]] = None,
    convex: bool = False,
    tilt_deg: float = 0.0,
    seed: Optional[int] = None,
) -> BRepDocument:
    """Rectangular plate pierced by cylindrical holes: ``6 + 2k`` faces, ``12 + 6k`` edges.

    Without explicit ``holes`` a layout of ``count`` holes is drawn from
    ``seed``. ``convex`` flips the wall orientation so the walls read as
    bosses; ``tilt_deg`` tilts every hole axis about x. Hole walls are
    labelled bolt holes only when concave and aligned with the plate normal.
    """
    if holes is None:
        if count < 1:
            raise GeneratorError("a plate needs at least one hole", count=count)
        rng = np.random.default_rng(seed)
        holes, (width, depth) = random_hole_layout(count, rng)
        thickness = rng.uniform(0.3, 1.0)
        if size is None:
            size = (width, depth, thickness)
    if size is None:
        raise GeneratorError("plate size is required with an explicit hole layout")
    width, depth, thickness = (float(s) for s in size)
    _check_positive(width=width, depth=depth, thickness=thickness)
    if not abs(tilt_deg) < 80.0:
        raise GeneratorError("hole tilt must stay below 80 degrees", tilt_deg=tilt_deg)
    tilt = math.radians(tilt_deg)
    _check_hole_layout(holes, (width, depth, thickness), tilt)

    builder = SolidBuilder()
    plate = add_box(builder, (0.0, 0.0, 0.0), (width, depth, thickness))
    walls = []
    for cx, cy, r in holes:
        bore = _TiltedBore(cx, cy, r, thickness, tilt)
        halves = []
        for start in (0.0, np.pi):
            # the solid's outside is towards the bore axis
            face = builder.add_face(bore.wall(start), -bore.radial(start + np.pi / 2.0))
            if convex:
                builder.flip_orientation(face)
            halves.append(face)
        first, second = halves
        for start, face in zip((0.0, np.pi), halves):
            builder.add_edge(bore.rim(start, 0.0), face, plate["bottom"])
            builder.add_edge(bore.rim(start, thickness), face, plate["top"])
        builder.add_edge(bore.seam(0.0), second, first)
        builder.add_edge(bore.seam(np.pi), second, first)
        walls.extend(halves)

    labelled = not convex and abs(tilt_deg) <= ALIGNED_HOLE_TILT_DEG
    return builder.document(
        hull_planes=plate.values(),
        bolt_holes=walls if labelled else (),
    )
