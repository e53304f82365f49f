"""Tests for the error hierarchy."""
import pytest

from app.core.errors import (
    EXIT_FORMAT,
    EXIT_VALIDATION,
    BRepError,
    DocumentError,
    LimitExceededError,
    ParseError,
    StreamFormatError,
    UnexpectedEndError,
)


class TestErrorPayloads:
    """Tests for to_dict and exit codes."""

    def test_details_in_payload(self):
        """Test details are merged and None values dropped."""
        error = LimitExceededError("too many faces", faces=120, limit=100, hint=None)
        assert error.to_dict() == {
            "error": "limit_exceeded",
            "message": "too many faces",
            "faces": 120,
            "limit": 100,
        }
        assert error.exit_code == EXIT_VALIDATION

    def test_parse_error_position(self):
        """Test parse errors carry position, expectation and found token."""
        error = UnexpectedEndError("stream ended", position=7, expected=["FACE_END"])
        payload = error.to_dict()
        assert payload["error"] == "unexpected_end"
        assert payload["position"] == 7
        assert payload["expected"] == ["FACE_END"]
        assert "found" not in payload
        assert isinstance(error, ParseError)
        assert error.exit_code == EXIT_FORMAT

    def test_stream_format_offset(self):
        """Test container errors report a byte offset."""
        error = StreamFormatError("bad magic", offset=0)
        assert error.offset == 0
        assert error.to_dict()["offset"] == 0

    @pytest.mark.parametrize("error_type", [DocumentError, StreamFormatError, ParseError])
    def test_format_errors_exit_two(self, error_type):
        """Test format-level errors map to exit code 2."""
        assert error_type.exit_code == EXIT_FORMAT
        assert issubclass(error_type, BRepError)
