"""
Token stream value type and its on-disk containers.

Binary layout (little endian)::

    magic   4 bytes  b"ABTK"
    version u8       1
    count   u32      number of tokens
    tokens  u16 * count

The text layout holds one decimal id per line; ``#`` starts a comment.
"""

from __future__ import annotations

import struct
from collections import Counter
from dataclasses import dataclass
from pathlib import Path
from typing import Dict, Iterable, Iterator, Tuple, Union

from app.core.errors import StreamFormatError
from app.tokens.vocabulary import VOCAB_SIZE, TokenKind, describe, token_kind

MAGIC = b"ABTK"
FORMAT_VERSION = 1
_HEADER = struct.Struct("<4sBI")


@dataclass(frozen=True)
class TokenStream:
    tokens: Tuple[int, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "tokens", tuple(int(t) for t in self.tokens))

    def __len__(self) -> int:
        return len(self.tokens)

    def __iter__(self) -> Iterator[int]:
        return iter(self.tokens)

    def __getitem__(self, item):
        return self.tokens[item]

    def __add__(self, other: "TokenStream") -> "TokenStream":
        return TokenStream(self.tokens + tuple(other))

    def kind_counts(self) -> Dict[str, int]:
        counts: Dict[str, int] = {kind.value: 0 for kind in TokenKind}
        invalid = Counter(0 <= token < VOCAB_SIZE for token in self.tokens)[False]
        for token in self.tokens:
            if 0 <= token < VOCAB_SIZE:
                counts[token_kind(token).value] += 1
        if invalid:
            counts["invalid"] = invalid
        return counts

    def pretty(self) -> str:
        return " ".join(describe(token) for token in self.tokens)

    def to_bytes(self) -> bytes:
        for position, token in enumerate(self.tokens):
            if not 0 <= token <= 0xFFFF:
                raise StreamFormatError(
                    f"token {token} at position {position} does not fit in 16 bits",
                    offset=_HEADER.size + 2 * position,
                )
        header = _HEADER.pack(MAGIC, FORMAT_VERSION, len(self.tokens))
        return header + struct.pack(f"<{len(self.tokens)}H", *self.tokens)

    @classmethod
    def from_bytes(cls, data: bytes) -> "TokenStream":
        if len(data) < _HEADER.size:
            raise StreamFormatError(
                f"stream header needs {_HEADER.size} bytes, got {len(data)}", offset=len(data)
            )
        magic, version, count = _HEADER.unpack_from(data, 0)
        if magic != MAGIC:
            raise StreamFormatError(f"bad magic {magic!r}, expected {MAGIC!r}", offset=0)
        if version != FORMAT_VERSION:
            raise StreamFormatError(f"unsupported stream format version {version}", offset=4)
        body = len(data) - _HEADER.size
        if body != 2 * count:
            raise StreamFormatError(
                f"header declares {count} tokens but body holds {body} bytes",
                offset=min(len(data), _HEADER.size + 2 * count),
            )
        return cls(struct.unpack_from(f"<{count}H", data, _HEADER.size))

    def to_text(self) -> str:
        return "".join(f"{token}\n" for token in self.tokens)

    @classmethod
    def from_text(cls, text: str) -> "TokenStream":
        tokens = []
        for line_number, line in enumerate(text.splitlines(), start=1):
            content = line.split("#", 1)[0].strip()
            if not content:
                continue
            try:
                tokens.append(int(content))
            except ValueError:
                raise StreamFormatError(
                    f"line {line_number}: {content!r} is not a token id", offset=line_number
                ) from None
        return cls(tokens)

    @classmethod
    def of(cls, tokens: Iterable[int]) -> "TokenStream":
        return cls(tuple(tokens))


def _is_text(path: Path) -> bool:
    return path.suffix.lower() in {".txt", ".tok"}


def read_stream(path: Union[str, Path]) -> TokenStream:
    path = Path(path)
    try:
        data = path.read_bytes()
    except OSError as exc:
        raise StreamFormatError(f"cannot read stream: {exc.strerror}", offset=0, path=str(path)) from exc
    if not _is_text(path):
        return TokenStream.from_bytes(data)
    try:
        text = data.decode("utf-8")
    except UnicodeDecodeError as exc:
        raise StreamFormatError(
            f"text stream is not valid UTF-8: {exc.reason}", offset=exc.start, path=str(path)
        ) from None
    return TokenStream.from_text(text)


def write_stream(path: Union[str, Path], stream: TokenStream) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    if _is_text(path):
        path.write_text(stream.to_text(), encoding="utf-8")
    else:
        path.write_bytes(stream.to_bytes())
    return path
