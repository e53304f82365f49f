"""
Tokenizer API endpoints.
"""

import logging
from typing import Any, Dict, List, Literal, Optional

from fastapi import APIRouter
from pydantic import BaseModel, Field

from app.config import get_settings
from app.evaluation.constraints import detect_constraints
from app.evaluation.validity import check_validity
from app.pipeline import detokenize, stream_stats, tokenize
from app.schema.document import BRepDocument
from app.schema.reports import ConstraintReport, StreamStats, ValidityReport
from app.topology.references import WindowStride
from app.topology.traversal import FaceOrdering
from app.tokens.decoder import DecodeMode
from app.tokens.stream import TokenStream
from app.tokens.vocabulary import vocabulary_manifest

logger = logging.getLogger(__name__)

router = APIRouter()


class TokenizeRequest(BaseModel):
    """Request model for tokenizing one solid."""
    document: BRepDocument
    meta: Literal["none", "auto", "easy", "medium", "hard", "random"] = Field(
        "none", description="Complexity meta block; auto picks the class from the face count"
    )
    stride: WindowStride = Field(WindowStride.ONE, description="Reference window stride")
    ordering: FaceOrdering = Field(FaceOrdering.BFT, description="Breadth-first levels or one coordinate-sorted level")
    normalize: bool = Field(True, description="Scale the solid into [-1, 1]^3 first")


class TokenizeResponse(BaseModel):
    tokens: List[int]
    stats: StreamStats


class DetokenizeRequest(BaseModel):
    tokens: List[int] = Field(..., min_length=1)
    mode: DecodeMode = DecodeMode.UNCONDITIONAL
    stride: WindowStride = WindowStride.ONE


class DetokenizeResponse(BaseModel):
    document: BRepDocument
    merged_edges: int = Field(..., description="Unassigned edges unified with their re-emitted copy")
    unassigned_edges: List[int] = Field(default_factory=list)


class ValidateRequest(BaseModel):
    document: BRepDocument
    gap_tol: Optional[float] = Field(None, gt=0)


class ConstraintRequest(BaseModel):
    document: BRepDocument
    axis_tol_deg: Optional[float] = Field(None, gt=0, le=90)


@router.post("/tokenize", response_model=TokenizeResponse)
def tokenize_document(request: TokenizeRequest) -> TokenizeResponse:
    """Compile a BRepDocument into token ids."""
    graph = request.document.to_graph()
    result = tokenize(
        graph,
        stride=request.stride,
        meta=request.meta,
        normalize=request.normalize,
        ordering=request.ordering,
    )
    logger.info(f"Tokenized {graph.num_faces} faces into {len(result.stream)} tokens")
    return TokenizeResponse(
        tokens=list(result.stream),
        stats=stream_stats(result.stream, stride=request.stride),
    )


@router.post("/detokenize", response_model=DetokenizeResponse)
def detokenize_tokens(request: DetokenizeRequest) -> DetokenizeResponse:
    """Decode token ids into a BRepDocument."""
    result = detokenize(TokenStream.of(request.tokens), mode=request.mode, stride=request.stride)
    return DetokenizeResponse(
        document=BRepDocument.from_graph(result.graph),
        merged_edges=len(result.merged),
        unassigned_edges=list(result.unmatched),
    )


@router.post("/validate", response_model=ValidityReport)
def validate_document(request: ValidateRequest) -> ValidityReport:
    gap_tol = request.gap_tol or get_settings().GAP_TOLERANCE
    return check_validity(request.document.to_graph(), gap_tol)


@router.post("/constraints", response_model=ConstraintReport)
def constraints_of_document(request: ConstraintRequest) -> ConstraintReport:
    axis_tol = request.axis_tol_deg or get_settings().BOLT_AXIS_TOLERANCE_DEG
    return detect_constraints(request.document.to_graph(), axis_tol)


@router.get("/vocabulary")
async def get_vocabulary() -> Dict[str, Any]:
    """Versioned vocabulary layout."""
    return vocabulary_manifest()
