"""
Exception handlers for the HTTP surface.

Toolchain errors answer 422 with the same payload the CLI prints, so a
client sees the error ``code`` and details such as the failing token
``position``. Anything unexpected is logged with its traceback and answers 500.
"""

import traceback
from typing import Any, Dict

from fastapi import HTTPException, Request
from fastapi.responses import JSONResponse
from starlette.status import HTTP_422_UNPROCESSABLE_ENTITY, HTTP_500_INTERNAL_SERVER_ERROR

from app.core.errors import BRepError
from app.core.logging import log_with_extra


def _request_fields(request: Request) -> Dict[str, Any]:
    return {"path": request.url.path, "method": request.method}


async def http_exception_handler(request: Request, exc: HTTPException) -> JSONResponse:
    """
    Handle HTTPException (unknown routes, wrong methods) with structured logging.

    Returns:
        JSONResponse with the exception's status code and detail
    """
    log_with_extra(
        request.app.state.logger,
        "warning",
        f"HTTP {exc.status_code}: {exc.detail}",
        status_code=exc.status_code,
        **_request_fields(request),
    )
    return JSONResponse(status_code=exc.status_code, content={"detail": exc.detail})


async def brep_exception_handler(request: Request, exc: BRepError) -> JSONResponse:
    """Map toolchain errors to 422 responses carrying ``exc.to_dict()``."""
    log_with_extra(
        request.app.state.logger,
        "warning",
        f"request rejected: {exc.message}",
        error=exc.code,
        **_request_fields(request),
    )
    return JSONResponse(status_code=HTTP_422_UNPROCESSABLE_ENTITY, content={"detail": exc.to_dict()})


async def general_exception_handler(request: Request, exc: Exception) -> JSONResponse:
    """
    Handle every other exception.

    Returns:
        JSONResponse with a generic message; details stay in the log
    """
    log_with_extra(
        request.app.state.logger,
        "error",
        f"unhandled {type(exc).__name__}: {exc}",
        traceback="".join(traceback.format_exception(type(exc), exc, exc.__traceback__)),
        **_request_fields(request),
    )
    return JSONResponse(
        status_code=HTTP_500_INTERNAL_SERVER_ERROR,
        content={"detail": {"error": "internal_error", "message": "Internal server error"}},
    )
