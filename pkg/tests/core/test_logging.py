"""Tests for logging configuration and structured fields."""
import io
import json
import logging
from unittest.mock import patch

import pytest

from app.core.logging import (
    ConsoleFormatter,
    StructuredJSONFormatter,
    configure_logging,
    log_with_extra,
)


class _Collector(logging.Handler):
    def __init__(self):
        super().__init__()
        self.records = []

    def emit(self, record):
        self.records.append(record)


@pytest.fixture
def collected():
    logger = configure_logging(log_level="DEBUG", format_type="json")
    collector = _Collector()
    logger.addHandler(collector)
    yield collector
    logger.removeHandler(collector)
    configure_logging()


def _record(**fields):
    record = logging.LogRecord("app.tokens", logging.WARNING, __file__, 12, "stream too long", (), None)
    record.extra_fields = fields
    return record


class TestFormatters:
    """Tests for the JSON and console formatters."""

    def test_json_merges_fields(self):
        """Test structured fields land at the top level of the JSON object."""
        entry = json.loads(StructuredJSONFormatter("svc").format(_record(tokens=3100, faces=80)))
        assert entry["service_name"] == "svc"
        assert entry["log_level"] == "WARNING"
        assert entry["logger"] == "app.tokens"
        assert entry["message"] == "stream too long"
        assert entry["tokens"] == 3100
        assert entry["faces"] == 80

    def test_console_line_without_color(self):
        """Test the console format renders key=value fields on one line."""
        line = ConsoleFormatter(color=False).format(_record(tokens=3100))
        assert "\n" not in line
        assert "WARNING" in line
        assert line.endswith("app.tokens: stream too long tokens=3100")

    def test_console_without_fields(self):
        """Test a record without fields ends with its message."""
        line = ConsoleFormatter(color=False).format(_record())
        assert line.endswith("stream too long")


class TestConfigureLogging:
    """Tests for configure_logging and log_with_extra."""

    def test_single_handler(self):
        """Test reconfiguring replaces the handler instead of stacking."""
        configure_logging(format_type="json")
        logger = configure_logging(format_type="console")
        assert len(logger.handlers) == 1
        assert logger.propagate is False
        assert isinstance(logger.handlers[0].formatter, ConsoleFormatter)

    def test_module_loggers_propagate(self, collected):
        """Test records from module loggers reach the package handler."""
        logging.getLogger("app.pipeline").info("tokenized")
        assert [r.getMessage() for r in collected.records] == ["tokenized"]

    def test_extra_fields_attached(self, collected):
        """Test log_with_extra attaches fields and the caller's location."""
        log_with_extra(logging.getLogger("app.cli"), "info", "wrote stream", tokens=105)
        record = collected.records[-1]
        assert record.extra_fields == {"tokens": 105}
        assert record.module == "test_logging"

    def test_level_filters(self, collected):
        """Test records below the configured level are dropped."""
        configure_logging(log_level="WARNING", format_type="json").addHandler(collected)
        log_with_extra(logging.getLogger("app.cli"), "debug", "hidden")
        assert collected.records == []

    @pytest.mark.parametrize("format_type", ["console", "json"])
    def test_handler_follows_current_stderr(self, format_type):
        """Test records reach the stderr in place at emit time, not the one at setup."""
        first = io.StringIO()
        with patch("sys.stderr", first):
            logger = configure_logging(format_type=format_type)
        first.close()
        second = io.StringIO()
        with patch("sys.stderr", second):
            logger.warning("after the first stream closed")
        configure_logging()
        assert "after the first stream closed" in second.getvalue()
