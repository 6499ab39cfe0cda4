import struct
from typing import Type

import numpy as np

from core.errors import FormatError, TruncatedFileError


class ByteReader:
    """Sequential little-endian reader that reports the offset of every failure."""

    def __init__(
        self,
        data: bytes,
        label: str,
        truncated_error: Type[FormatError] = TruncatedFileError,
    ):
        self.data = data
        self.label = label
        self.offset = 0
        self._truncated_error = truncated_error

    @property
    def remaining(self) -> int:
        return len(self.data) - self.offset

    def take(self, count: int, what: str) -> bytes:
        if count < 0 or count > self.remaining:
            raise self._truncated_error(
                f"{self.label}: truncated while reading {what} "
                f"(need {count} bytes, {self.remaining} left)",
                offset=self.offset,
            )
        chunk = self.data[self.offset : self.offset + count]
        self.offset += count
        return chunk

    def unpack(self, fmt: str, what: str) -> tuple:
        return struct.unpack(fmt, self.take(struct.calcsize(fmt), what))

    def u8(self, what: str) -> int:
        return self.unpack("<B", what)[0]

    def u16(self, what: str) -> int:
        return self.unpack("<H", what)[0]

    def u32(self, what: str) -> int:
        return self.unpack("<I", what)[0]

    def text(self, what: str) -> str:
        length = self.u16(f"{what} length")
        start = self.offset
        try:
            return self.take(length, what).decode("utf-8")
        except UnicodeDecodeError as error:
            raise FormatError(f"{self.label}: {what} is not UTF-8", offset=start) from error

    def f64_block(self, count: int, what: str) -> np.ndarray:
        raw = self.take(8 * count, what)
        return np.frombuffer(raw, dtype="<f8").astype(np.float64, copy=True)


def pack_text(text: str) -> bytes:
    encoded = text.encode("utf-8")
    if len(encoded) > 0xFFFF:
        raise FormatError(f"String too long to encode ({len(encoded)} bytes)")
    return struct.pack("<H", len(encoded)) + encoded


def pack_f64(values: np.ndarray) -> bytes:
    return np.ascontiguousarray(values, dtype="<f8").tobytes()
