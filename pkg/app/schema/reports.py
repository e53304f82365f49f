"""Report schemas produced by validation, constraint detection and metrics."""
from typing import Dict, List, Optional

from pydantic import BaseModel, ConfigDict, Field, model_validator


class IncidenceViolation(BaseModel):
    edge: int = Field(..., ge=0)
    incident_faces: int = Field(..., ge=0, le=2)


class GapViolation(BaseModel):
    edge: int = Field(..., ge=0)
    face: int = Field(..., ge=0)
    max_gap: float = Field(..., ge=0)


class ValidityReport(BaseModel):
    """Kernel-free watertightness proxy for one solid."""
    is_manifold_closed: bool
    edge_incidence_violations: List[IncidenceViolation] = Field(default_factory=list)
    geometric_gap_violations: List[GapViolation] = Field(default_factory=list)
    dangling_edges: List[int] = Field(default_factory=list)
    gap_tolerance: float = Field(..., gt=0)

    @model_validator(mode="after")
    def closed_iff_no_violations(self) -> "ValidityReport":
        clean = not (
            self.edge_incidence_violations
            or self.geometric_gap_violations
            or self.dangling_edges
        )
        if self.is_manifold_closed != clean:
            raise ValueError("is_manifold_closed must be true exactly when no violation is listed")
        return self

    @property
    def violation_count(self) -> int:
        return (
            len(self.edge_incidence_violations)
            + len(self.geometric_gap_violations)
            + len(self.dangling_edges)
        )


class ConstraintReport(BaseModel):
    hull_planes: List[int] = Field(default_factory=list)
    bolt_holes: List[int] = Field(default_factory=list)
    orientation_known: bool = True


class MetricsReport(BaseModel):
    """Set-to-set generation metrics; MMD and JSD are scaled by 100."""
    cov: float = Field(..., ge=0, le=100)
    mmd: float = Field(..., ge=0)
    jsd: float = Field(..., ge=0)
    novel: Optional[float] = Field(None, ge=0, le=100)
    unique: Optional[float] = Field(None, ge=0, le=100)
    valid: Optional[float] = Field(None, ge=0, le=100)
    generated: int = Field(0, ge=0)
    reference: int = Field(0, ge=0)


class StreamStats(BaseModel):
    tokens: int
    faces: int
    edges: int
    levels: int
    faces_per_level: List[int]
    kinds: Dict[str, int]
    complexity: str
    meta: Optional[str] = None


class RoundTripReport(BaseModel):
    """Outcome of tokenizing then detokenizing one solid."""
    topology_identical: bool
    placement_ok: bool
    max_face_box_error: float
    max_edge_box_error: float
    tokens: int
    # decoded face id -> original face id
    face_mapping: List[int]

    model_config = ConfigDict(json_schema_extra={
        "example": {
            "topology_identical": True,
            "placement_ok": True,
            "max_face_box_error": 0.0009,
            "max_edge_box_error": 0.0009,
            "tokens": 108,
            "face_mapping": [0, 1, 2, 3],
        }
    })

    @property
    def ok(self) -> bool:
        return self.topology_identical and self.placement_ok
