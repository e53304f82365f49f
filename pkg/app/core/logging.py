"""
Logging setup shared by the CLI and the service.

Every record goes to stderr so command output on stdout stays parseable.
Pipeline stages attach structured fields (face, edge and token counts, file
paths, stream positions) through ``log_with_extra``; each format renders them
in its own way.
"""

import json
import logging
import sys
from datetime import datetime, timezone
from typing import Any, Dict

from rich.console import Console
from rich.logging import RichHandler

PACKAGE_LOGGER = "app"
EXTRA_ATTR = "extra_fields"


def _extra_fields(record: logging.LogRecord) -> Dict[str, Any]:
    return getattr(record, EXTRA_ATTR, None) or {}


class StructuredJSONFormatter(logging.Formatter):
    """One JSON object per record, structured fields merged at the top level."""

    def __init__(self, service_name: str = "brep-tokenizer"):
        super().__init__()
        self.service_name = service_name

    def format(self, record: logging.LogRecord) -> str:
        entry = {
            "timestamp": datetime.fromtimestamp(record.created, tz=timezone.utc).isoformat(),
            "service_name": self.service_name,
            "log_level": record.levelname,
            "logger": record.name,
            "message": record.getMessage(),
            "location": f"{record.module}:{record.lineno}",
        }
        entry.update(_extra_fields(record))
        if record.exc_info:
            entry["exception"] = self.formatException(record.exc_info)
        return json.dumps(entry, default=str)


class ConsoleFormatter(logging.Formatter):
    """Single-line console records with ``key=value`` fields, colored on a TTY."""

    COLORS = {
        "DEBUG": "\033[36m",
        "INFO": "\033[32m",
        "WARNING": "\033[33m",
        "ERROR": "\033[31m",
        "CRITICAL": "\033[35m",
    }
    RESET = "\033[0m"
    DIM = "\033[2m"

    def __init__(self, service_name: str = "brep-tokenizer", color: bool = True):
        super().__init__()
        self.service_name = service_name
        self.color = color

    def _paint(self, text: str, code: str) -> str:
        return f"{code}{text}{self.RESET}" if self.color else text

    def format(self, record: logging.LogRecord) -> str:
        timestamp = datetime.fromtimestamp(record.created, tz=timezone.utc).strftime("%H:%M:%S")
        level = self._paint(f"{record.levelname:<7}", self.COLORS.get(record.levelname, ""))
        line = f"{self._paint(timestamp, self.DIM)} {level} {record.name}: {record.getMessage()}"
        fields = " ".join(f"{key}={value}" for key, value in _extra_fields(record).items())
        if fields:
            line += f" {self._paint(fields, self.DIM)}"
        if record.exc_info:
            line += "\n" + self.formatException(record.exc_info)
        return line


class _StderrHandler(logging.StreamHandler):
    """StreamHandler bound to whatever ``sys.stderr`` is when a record is emitted."""

    @property
    def stream(self):
        return sys.stderr

    @stream.setter
    def stream(self, value) -> None:
        pass


class _RichFieldsHandler(RichHandler):
    """RichHandler that appends structured fields to the message."""

    def emit(self, record: logging.LogRecord) -> None:
        fields = _extra_fields(record)
        if fields:
            record.msg = f"{record.getMessage()} " + " ".join(f"{k}={v}" for k, v in fields.items())
            record.args = ()
        super().emit(record)


def configure_logging(
    service_name: str = "brep-tokenizer",
    log_level: str = "INFO",
    format_type: str = "console",
) -> logging.Logger:
    """
    Configure the ``app`` package logger.

    Module loggers from ``logging.getLogger(__name__)`` propagate to it.
    Calling this again replaces the previous handler.

    Args:
        service_name: Name reported in JSON records and console lines
        log_level: DEBUG, INFO, WARNING, ERROR or CRITICAL
        format_type: 'console', 'json' or 'rich'

    Returns:
        The configured package logger
    """
    logger = logging.getLogger(PACKAGE_LOGGER)
    level = getattr(logging, log_level.upper())
    logger.setLevel(level)

    for handler in logger.handlers[:]:
        logger.removeHandler(handler)

    if format_type == "rich":
        handler: logging.Handler = _RichFieldsHandler(
            console=Console(stderr=True),
            show_path=True,
            markup=False,
            rich_tracebacks=True,
        )
    else:
        handler = _StderrHandler()
        if format_type == "json":
            handler.setFormatter(StructuredJSONFormatter(service_name=service_name))
        else:
            handler.setFormatter(ConsoleFormatter(service_name=service_name, color=sys.stderr.isatty()))

    handler.setLevel(level)
    logger.addHandler(handler)
    logger.propagate = False
    return logger


def log_with_extra(logger: logging.Logger, level: str, message: str, **extra_fields: Any) -> None:
    """
    Log ``message`` with structured fields attached to the record.

    Args:
        logger: The logger instance
        level: debug, info, warning or error
        message: Log message
        **extra_fields: Fields rendered by the active formatter
    """
    logger.log(
        getattr(logging, level.upper()),
        message,
        extra={EXTRA_ATTR: extra_fields},
        stacklevel=2,
    )
