"""Schema package for interchange documents and reports."""
from app.schema.document import (
    SCHEMA_VERSION,
    BRepDocument,
    EdgeDocument,
    FaceDocument,
    Labels,
    load_document,
    save_document,
)
from app.schema.reports import (
    ConstraintReport,
    GapViolation,
    IncidenceViolation,
    MetricsReport,
    RoundTripReport,
    StreamStats,
    ValidityReport,
)

__all__ = [
    "SCHEMA_VERSION",
    "BRepDocument",
    "EdgeDocument",
    "FaceDocument",
    "Labels",
    "load_document",
    "save_document",
    "ConstraintReport",
    "GapViolation",
    "IncidenceViolation",
    "MetricsReport",
    "RoundTripReport",
    "StreamStats",
    "ValidityReport",
]
