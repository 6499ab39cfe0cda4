"""FVSEQ1 feature files.

Layout (little-endian): magic ``FVSEQ1``, modality byte (0 visual, 1 audio),
u16-length UTF-8 episode id, T u32, D u32, then T * D f64 values row-major.
"""

import struct
from pathlib import Path

from core.config import Config
from core.errors import FormatError, TruncatedFileError
from data.features import AUDIO, VISUAL, FeatureSequence
from utils.binary import ByteReader, pack_f64, pack_text
from utils.logger import get_logger

logger = get_logger()

_MODALITY_CODES = {VISUAL: 0, AUDIO: 1}
_MODALITY_NAMES = {code: name for name, code in _MODALITY_CODES.items()}


def encode_fvseq(seq: FeatureSequence) -> bytes:
    if seq.length < 1:
        raise FormatError(f"Refusing to encode empty sequence for {seq.episode_id!r}")
    return b"".join(
        [
            Config.FVSEQ_MAGIC,
            struct.pack("<B", _MODALITY_CODES[seq.modality]),
            pack_text(seq.episode_id),
            struct.pack("<II", seq.length, seq.dim),
            pack_f64(seq.matrix),
        ]
    )


def decode_fvseq(data: bytes, label: str = "fvseq") -> FeatureSequence:
    reader = ByteReader(data, label)
    magic = reader.take(len(Config.FVSEQ_MAGIC), "magic")
    if magic != Config.FVSEQ_MAGIC:
        raise FormatError(f"{label}: bad magic {magic!r}, not an FVSEQ1 file", offset=0)

    code = reader.u8("modality")
    if code not in _MODALITY_NAMES:
        raise FormatError(f"{label}: unknown modality code {code}", offset=reader.offset - 1)
    episode_id = reader.text("episode id")

    header_end = reader.offset
    length, dim = reader.unpack("<II", "T x D header")
    if length < 1 or dim < 1:
        raise FormatError(f"{label}: empty matrix {length}x{dim}", offset=header_end)
    expected = 8 * length * dim
    if expected > reader.remaining:
        raise TruncatedFileError(
            f"{label}: header declares {length}x{dim} values ({expected} bytes) "
            f"but only {reader.remaining} bytes follow",
            offset=reader.offset,
        )
    if expected < reader.remaining:
        raise FormatError(
            f"{label}: {reader.remaining - expected} trailing bytes after payload",
            offset=reader.offset + expected,
        )

    matrix = reader.f64_block(length * dim, "payload").reshape(length, dim)
    return FeatureSequence(episode_id, _MODALITY_NAMES[code], matrix)


def write_fvseq(seq: FeatureSequence, path: Path) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_bytes(encode_fvseq(seq))
    logger.debug(f"Wrote {seq.modality} features {seq.length}x{seq.dim} to {path}")
    return path


def read_fvseq(path: Path) -> FeatureSequence:
    path = Path(path)
    seq = decode_fvseq(path.read_bytes(), label=str(path))
    logger.debug(f"Read {seq.modality} features {seq.length}x{seq.dim} from {path}")
    return seq
