"""WAV ingestion for 16-bit PCM and IEEE-float files.

The RIFF chunk walk only validates layout so errors can point at a byte
offset; sample decoding is left to ``scipy.io.wavfile``.
"""

import warnings
from dataclasses import dataclass
from pathlib import Path
from typing import Tuple

import numpy as np
from scipy.io import wavfile

from core.errors import FormatError, TruncatedFileError
from utils.binary import ByteReader
from utils.logger import get_logger

logger = get_logger()

FORMAT_PCM = 0x0001
FORMAT_IEEE_FLOAT = 0x0003
FORMAT_EXTENSIBLE = 0xFFFE

_FORMAT_NAMES = {
    0x0002: "Microsoft ADPCM",
    0x0006: "A-law",
    0x0007: "mu-law",
    0x0011: "IMA ADPCM",
    0x0055: "MPEG layer 3",
}

_SUPPORTED = {(FORMAT_PCM, 16), (FORMAT_IEEE_FLOAT, 32), (FORMAT_IEEE_FLOAT, 64)}
_PCM16_SCALE = 32768.0


@dataclass
class AudioClip:
    """Channel-major float samples in [-1, 1]."""

    sample_rate: int
    samples: np.ndarray

    def __post_init__(self) -> None:
        self.samples = np.atleast_2d(np.asarray(self.samples, dtype=np.float64))
        if self.sample_rate <= 0:
            raise ValueError(f"sample_rate must be positive, got {self.sample_rate}")
        if self.samples.ndim != 2 or self.samples.shape[0] not in (1, 2):
            raise FormatError(f"Expected 1 or 2 channels, got samples of shape {self.samples.shape}")

    @property
    def channels(self) -> int:
        return int(self.samples.shape[0])

    @property
    def n_samples(self) -> int:
        return int(self.samples.shape[1])

    @property
    def duration(self) -> float:
        return self.n_samples / self.sample_rate


def _encoding_name(tag: int, bits: int) -> str:
    if tag == FORMAT_PCM:
        return f"PCM {bits}-bit"
    if tag == FORMAT_IEEE_FLOAT:
        return f"IEEE float {bits}-bit"
    return f"format tag 0x{tag:04X} ({_FORMAT_NAMES.get(tag, 'unknown')})"


def scan_wav_header(data: bytes, label: str = "wav") -> Tuple[int, int, int, int]:
    """Walk the RIFF chunks; returns ``(format_tag, channels, sample_rate, bits)``."""
    reader = ByteReader(data, label)
    if reader.take(4, "RIFF magic") != b"RIFF":
        raise FormatError(f"{label}: not a RIFF file", offset=0)
    reader.u32("RIFF size")
    if reader.take(4, "WAVE magic") != b"WAVE":
        raise FormatError(f"{label}: RIFF file is not WAVE", offset=8)

    fmt = None
    while reader.remaining:
        chunk_start = reader.offset
        chunk_id = reader.take(4, "chunk id")
        size = reader.u32(f"size of chunk {chunk_id!r}")
        if chunk_id == b"fmt ":
            body = ByteReader(reader.take(size, "fmt chunk"), label)
            tag, channels, rate = body.unpack("<HHI", "fmt fields")
            body.unpack("<IH", "byte rate and block align")
            bits = body.u16("bits per sample")
            if tag == FORMAT_EXTENSIBLE:
                body.unpack("<HHI", "extensible header")
                tag = body.u16("extensible sub-format")
            fmt = (tag, channels, rate, bits)
        elif chunk_id == b"data":
            if fmt is None:
                raise FormatError(f"{label}: data chunk before fmt chunk", offset=chunk_start)
            if size > reader.remaining:
                raise TruncatedFileError(
                    f"{label}: data chunk declares {size} bytes but only {reader.remaining} remain",
                    offset=reader.offset,
                )
            if (fmt[0], fmt[3]) not in _SUPPORTED:
                raise FormatError(
                    f"{label}: unsupported encoding {_encoding_name(fmt[0], fmt[3])}; "
                    "expected PCM 16-bit or IEEE float",
                    offset=chunk_start,
                )
            if fmt[1] not in (1, 2):
                raise FormatError(f"{label}: {fmt[1]} channels, expected 1 or 2", offset=chunk_start)
            return fmt
        else:
            reader.take(size, f"chunk {chunk_id!r}")
        if size % 2 and reader.remaining:
            reader.take(1, "chunk padding")
    raise TruncatedFileError(f"{label}: no data chunk found", offset=reader.offset)


def read_wav(path: Path) -> AudioClip:
    path = Path(path)
    tag, channels, rate, bits = scan_wav_header(path.read_bytes(), label=str(path))
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", wavfile.WavFileWarning)
        try:
            rate, data = wavfile.read(path)
        except ValueError as error:
            raise FormatError(f"{path}: {error}") from error

    if data.dtype == np.int16:
        samples = data.astype(np.float64) / _PCM16_SCALE
    else:
        samples = data.astype(np.float64)
    samples = samples.reshape(samples.shape[0], -1).T
    logger.debug(f"Read {path}: {_encoding_name(tag, bits)}, {channels} ch, {rate} Hz, {samples.shape[1]} samples")
    return AudioClip(sample_rate=int(rate), samples=samples)


def write_wav(path: Path, clip: AudioClip, encoding: str = "pcm16") -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    interleaved = clip.samples.T
    if encoding == "pcm16":
        data = np.clip(np.round(interleaved * _PCM16_SCALE), -32768, 32767).astype(np.int16)
    elif encoding == "float32":
        data = interleaved.astype(np.float32)
    else:
        raise ValueError(f"Unknown WAV encoding {encoding!r}; expected 'pcm16' or 'float32'")
    if clip.channels == 1:
        data = data[:, 0]
    wavfile.write(path, clip.sample_rate, data)
    return path
