"""
Core module containing shared utilities for the toolchain.

This module includes:
- Logging configuration
- The error hierarchy and its HTTP exception handlers
"""

from .logging import configure_logging, log_with_extra, ConsoleFormatter, StructuredJSONFormatter
from .errors import BRepError
from .exceptions import http_exception_handler, brep_exception_handler, general_exception_handler

__all__ = [
    "configure_logging",
    "log_with_extra",
    "ConsoleFormatter",
    "StructuredJSONFormatter",
    "BRepError",
    "http_exception_handler",
    "brep_exception_handler",
    "general_exception_handler",
]
