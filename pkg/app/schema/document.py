"""
BRepDocument: the structured-text interchange format for solids.

A document lists face grids (32 x 32 x 3), edge grids (32 x 3) with their two
face indices, optional placement boxes and latent codes, and optional
constraint labels. Files are JSON.
"""
from pathlib import Path
from typing import List, Literal, Optional, Tuple, Union

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator, model_validator

from app.core.errors import BRepError, DocumentError
from app.geometry.grids import GRID_SIZE, Aabb, EdgeGrid, FaceGrid
from app.topology.graph import UNASSIGNED, BRepGraph, EdgeRecord, FaceRecord

SCHEMA_VERSION = "1"
SUPPORTED_SCHEMA_VERSIONS = frozenset({SCHEMA_VERSION})

Endpoint = Union[int, Literal["unassigned"]]
Point = Tuple[float, float, float]
Box = Tuple[float, float, float, float, float, float]


class FaceDocument(BaseModel):
    points: List[List[Point]] = Field(..., description="32 x 32 grid of xyz samples")
    box: Optional[Box] = Field(None, description="x0, y0, z0, x1, y1, z1; computed from points when absent")
    orientation_out: bool = Field(True, description="u x v derivative points out of the solid")
    code: Optional[List[int]] = Field(None, description="latent codebook indices, kept from a decoder")

    @field_validator("points")
    @classmethod
    def validate_shape(cls, v: List[List[Point]]) -> List[List[Point]]:
        if len(v) != GRID_SIZE or any(len(row) != GRID_SIZE for row in v):
            raise ValueError(f"face grid must be {GRID_SIZE} x {GRID_SIZE}")
        return v


class EdgeDocument(BaseModel):
    points: List[Point] = Field(..., description="32 xyz samples along the curve")
    faces: Tuple[Endpoint, Endpoint] = Field(..., description="incident face indices")
    box: Optional[Box] = None
    code: Optional[List[int]] = None

    @field_validator("points")
    @classmethod
    def validate_length(cls, v: List[Point]) -> List[Point]:
        if len(v) != GRID_SIZE:
            raise ValueError(f"edge grid must have {GRID_SIZE} points")
        return v


class Labels(BaseModel):
    bolt_holes: List[int] = Field(default_factory=list)
    hull_planes: List[int] = Field(default_factory=list)
    complexity: Optional[Literal["easy", "medium", "hard", "random"]] = None


class BRepDocument(BaseModel):
    """One solid as faces, edges and optional ground-truth labels."""
    schema_version: str = SCHEMA_VERSION
    orientation_known: bool = True
    faces: List[FaceDocument] = Field(..., min_length=1)
    edges: List[EdgeDocument] = Field(default_factory=list)
    labels: Optional[Labels] = None

    model_config = ConfigDict(json_schema_extra={
        "example": {
            "schema_version": "1",
            "orientation_known": True,
            "faces": [{"points": "32 x 32 list of [x, y, z]", "orientation_out": True}],
            "edges": [{"points": "32 list of [x, y, z]", "faces": [0, 1]}],
            "labels": {"bolt_holes": [], "hull_planes": [0], "complexity": "easy"},
        }
    })

    @field_validator("schema_version")
    @classmethod
    def validate_version(cls, v: str) -> str:
        if v not in SUPPORTED_SCHEMA_VERSIONS:
            raise ValueError(f"unsupported schema version '{v}'")
        return v

    @model_validator(mode="after")
    def indices_in_range(self) -> "BRepDocument":
        n = len(self.faces)
        for i, edge in enumerate(self.edges):
            for end in edge.faces:
                if end != "unassigned" and not 0 <= end < n:
                    raise ValueError(f"edge {i} references face {end}, document has {n} faces")
        if self.labels is not None:
            for face in self.labels.bolt_holes + self.labels.hull_planes:
                if not 0 <= face < n:
                    raise ValueError(f"label references face {face}, document has {n} faces")
        return self

    def to_graph(self) -> BRepGraph:
        try:
            faces = [
                FaceRecord(
                    grid=FaceGrid(np.array(f.points, dtype=np.float64), f.orientation_out),
                    box=Aabb.from_array(f.box) if f.box is not None else None,
                    code=tuple(f.code) if f.code is not None else None,
                )
                for f in self.faces
            ]
            edges = [
                EdgeRecord(
                    grid=EdgeGrid(np.array(e.points, dtype=np.float64)),
                    face_a=_endpoint_in(e.faces[0]),
                    face_b=_endpoint_in(e.faces[1]),
                    box=Aabb.from_array(e.box) if e.box is not None else None,
                    code=tuple(e.code) if e.code is not None else None,
                )
                for e in self.edges
            ]
            return BRepGraph(faces, edges, has_orientation=self.orientation_known)
        except BRepError as exc:
            raise DocumentError(f"document does not describe a valid solid: {exc.message}", **exc.details) from exc

    @classmethod
    def from_graph(cls, graph: BRepGraph, labels: Optional[Labels] = None) -> "BRepDocument":
        return cls(
            orientation_known=graph.has_orientation,
            faces=[
                FaceDocument(
                    points=face.grid.points.tolist(),
                    box=_box_out(face.box),
                    orientation_out=face.grid.orientation_out,
                    code=list(face.code) if face.code is not None else None,
                )
                for face in graph.faces
            ],
            edges=[
                EdgeDocument(
                    points=edge.grid.points.tolist(),
                    faces=(_endpoint_out(edge.face_a), _endpoint_out(edge.face_b)),
                    box=_box_out(edge.box),
                    code=list(edge.code) if edge.code is not None else None,
                )
                for edge in graph.edges
            ],
            labels=labels,
        )


def _endpoint_in(value: Endpoint) -> int:
    return UNASSIGNED if value == "unassigned" else int(value)


def _endpoint_out(value: int) -> Endpoint:
    return "unassigned" if value == UNASSIGNED else int(value)


def _box_out(box: Aabb) -> Box:
    return tuple(float(v) for v in box.as_array())


def load_document(path: Union[str, Path]) -> BRepDocument:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise DocumentError(f"cannot read document: {exc.strerror}", path=str(path)) from exc
    try:
        return BRepDocument.model_validate_json(text)
    except ValidationError as exc:
        first = exc.errors()[0]
        location = ".".join(str(part) for part in first["loc"])
        raise DocumentError(
            f"invalid document: {first['msg']}",
            path=str(path),
            location=location,
            errors=exc.error_count(),
        ) from exc


def save_document(document: BRepDocument, path: Union[str, Path]) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(document.model_dump_json(indent=1, exclude_none=True), encoding="utf-8")
    return path
