"""Tests for the token stream value type and its containers."""
import struct

import pytest

from app.core.errors import StreamFormatError
from app.tokens.stream import MAGIC, TokenStream, read_stream, write_stream


SAMPLE = TokenStream.of([0, 2, 12, 1035, 1036, 3236, 4, 3, 1])


class TestBinaryContainer:
    """Tests for the binary layout."""

    def test_round_trip(self):
        """Test bytes written are read back unchanged."""
        assert TokenStream.from_bytes(SAMPLE.to_bytes()) == SAMPLE

    def test_header_layout(self):
        """Test magic, version and count lead the file."""
        data = SAMPLE.to_bytes()
        assert data[:4] == MAGIC
        assert data[4] == 1
        assert struct.unpack_from("<I", data, 5)[0] == len(SAMPLE)
        assert len(data) == 9 + 2 * len(SAMPLE)

    def test_bad_magic(self):
        """Test a foreign file is rejected at offset 0."""
        with pytest.raises(StreamFormatError) as exc_info:
            TokenStream.from_bytes(b"NOPE" + SAMPLE.to_bytes()[4:])
        assert exc_info.value.offset == 0

    def test_unsupported_version(self):
        """Test an unknown format version is rejected."""
        data = bytearray(SAMPLE.to_bytes())
        data[4] = 9
        with pytest.raises(StreamFormatError):
            TokenStream.from_bytes(bytes(data))

    def test_truncated_body(self):
        """Test a body shorter than the declared count is rejected."""
        with pytest.raises(StreamFormatError):
            TokenStream.from_bytes(SAMPLE.to_bytes()[:-1])

    def test_short_header(self):
        """Test a file shorter than the header is rejected."""
        with pytest.raises(StreamFormatError):
            TokenStream.from_bytes(b"ABT")

    def test_token_too_wide(self):
        """Test tokens must fit in 16 bits."""
        with pytest.raises(StreamFormatError):
            TokenStream.of([70000]).to_bytes()


class TestTextContainer:
    """Tests for the text layout."""

    def test_round_trip_with_comments(self):
        """Test comments and blank lines are ignored."""
        text = "# header\n0\n\n2  # brep start\n" + "".join(f"{t}\n" for t in SAMPLE.tokens[2:])
        assert TokenStream.from_text(text) == SAMPLE

    def test_non_numeric_line(self):
        """Test a non-numeric line reports its line number."""
        with pytest.raises(StreamFormatError) as exc_info:
            TokenStream.from_text("0\nabc\n")
        assert exc_info.value.offset == 2


class TestStreamFiles:
    """Tests for read_stream and write_stream."""

    @pytest.mark.parametrize("name", ["stream.abtk", "stream.txt"])
    def test_file_round_trip(self, tmp_path, name):
        """Test both containers survive a trip through disk."""
        path = write_stream(tmp_path / name, SAMPLE)
        assert read_stream(path) == SAMPLE

    def test_missing_file(self, tmp_path):
        """Test a missing stream file is a format error."""
        with pytest.raises(StreamFormatError):
            read_stream(tmp_path / "missing.abtk")

    def test_invalid_utf8_text(self, tmp_path):
        """Test undecodable bytes in a text stream report their byte offset."""
        path = tmp_path / "bad.txt"
        path.write_bytes(b"0\n\xff\xfe\n")
        with pytest.raises(StreamFormatError) as exc_info:
            read_stream(path)
        assert exc_info.value.offset == 2
        assert exc_info.value.details["path"] == str(path)

    def test_kind_counts_and_pretty(self):
        """Test counts by kind and the readable rendering."""
        counts = SAMPLE.kind_counts()
        assert counts["sentinel"] == 5
        assert counts["coord"] == 2
        assert counts["ref_unassigned"] == 1
        assert SAMPLE.pretty().startswith("SEQ_START BREP_START C0 C1023 GF0 T_u")
