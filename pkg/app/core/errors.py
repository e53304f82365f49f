"""
Error hierarchy shared by every pipeline stage.

Each error carries a stable ``code`` used in structured logs and HTTP payloads,
and the CLI ``exit_code`` it maps to (1 domain/validation, 2 parse/format).
"""

from __future__ import annotations

from typing import Any, Dict, Optional, Sequence

EXIT_OK = 0
EXIT_VALIDATION = 1
EXIT_FORMAT = 2
EXIT_USAGE = 3


class BRepError(Exception):
    """Base class for all toolchain errors."""

    code: str = "brep_error"
    exit_code: int = EXIT_VALIDATION

    def __init__(self, message: str, **details: Any) -> None:
        super().__init__(message)
        self.message = message
        self.details = details

    def to_dict(self) -> Dict[str, Any]:
        payload: Dict[str, Any] = {"error": self.code, "message": self.message}
        payload.update({k: v for k, v in self.details.items() if v is not None})
        return payload


# Geometry


class MalformedGeometryError(BRepError):
    """Grid has the wrong shape or non-finite coordinates."""

    code = "malformed_geometry"


class DegenerateGeometryError(BRepError):
    """Geometry collapses to a point or has zero area."""

    code = "degenerate_geometry"


# Codec


class ContractViolationError(BRepError):
    """Caller broke a documented precondition (dimension mismatch, plan/codes mismatch)."""

    code = "contract_violation"


class InvalidCodeError(BRepError):
    code = "invalid_code"


# Topology


class TopologyError(BRepError):
    code = "topology_error"


class UnreachableFacesError(TopologyError):
    code = "unreachable_faces"

    def __init__(self, orphans: Sequence[int]) -> None:
        orphans = sorted(orphans)
        super().__init__(
            f"{len(orphans)} face(s) unreachable from the start set: {orphans}",
            orphans=orphans,
        )
        self.orphans = orphans


class WindowCapacityError(TopologyError):
    code = "window_capacity"


class DanglingReferenceError(TopologyError):
    code = "dangling_reference"
    exit_code = EXIT_FORMAT


class ModeError(TopologyError):
    """Unassigned reference seen outside autocomplete mode."""

    code = "mode_error"
    exit_code = EXIT_FORMAT


# Token streams


class TokenStreamError(BRepError):
    code = "token_stream_error"
    exit_code = EXIT_FORMAT


class ParseError(TokenStreamError):
    code = "parse_error"

    def __init__(
        self,
        message: str,
        *,
        position: int,
        expected: Optional[Sequence[str]] = None,
        found: Optional[int] = None,
    ) -> None:
        super().__init__(
            f"{message} at token {position}",
            position=position,
            expected=list(expected) if expected else None,
            found=found,
        )
        self.position = position
        self.expected = list(expected or [])
        self.found = found


class UnexpectedEndError(ParseError):
    code = "unexpected_end"


class StreamFormatError(TokenStreamError):
    """Binary or text container is malformed (magic, version, length)."""

    code = "stream_format"

    def __init__(self, message: str, *, offset: Optional[int] = None, **details: Any) -> None:
        super().__init__(message, offset=offset, **details)
        self.offset = offset


# Documents and corpus


class DocumentError(BRepError):
    code = "document_error"
    exit_code = EXIT_FORMAT


class GeneratorError(BRepError):
    code = "generator_error"


class LimitExceededError(BRepError):
    code = "limit_exceeded"
