"""Checkpoint codec.

Layout (little-endian): magic ``VPCKPT1``, version u16, spec record (kind as
u16-length UTF-8, visual_dim, audio_dim, embed_dim, hidden as u32, output_bias
u8), parameter count u32, then per parameter: u16-length UTF-8 name, rows u32,
cols u32 and ``rows * cols`` f64 values. Vectors are stored as ``n x 1``.
"""

import struct
from pathlib import Path

from core.config import Config
from core.errors import ConfigError, CorruptCheckpointError, FormatError
from models.fusion import build
from models.spec import ModelSpec, ModelState
from utils.binary import ByteReader, pack_f64, pack_text
from utils.logger import get_logger

logger = get_logger()


def _shape_2d(shape: tuple) -> tuple:
    return (shape[0], 1) if len(shape) == 1 else shape


def encode_checkpoint(model: ModelState) -> bytes:
    spec = model.spec
    parts = [
        Config.CHECKPOINT_MAGIC,
        struct.pack("<H", Config.CHECKPOINT_VERSION),
        pack_text(spec.kind),
        struct.pack(
            "<IIIIB",
            spec.visual_dim,
            spec.audio_dim,
            spec.embed_dim,
            spec.hidden,
            1 if spec.output_bias else 0,
        ),
        struct.pack("<I", len(model.params)),
    ]
    for name, param in model.params.items():
        rows, cols = _shape_2d(param.shape)
        parts.append(pack_text(name))
        parts.append(struct.pack("<II", rows, cols))
        parts.append(pack_f64(param.value))
    return b"".join(parts)


def decode_checkpoint(data: bytes, label: str = "checkpoint") -> ModelState:
    reader = ByteReader(data, label, truncated_error=CorruptCheckpointError)
    magic = reader.take(len(Config.CHECKPOINT_MAGIC), "magic")
    if magic != Config.CHECKPOINT_MAGIC:
        raise FormatError(f"{label}: bad magic {magic!r}, not a viewpulse checkpoint", offset=0)
    version = reader.u16("version")
    if version != Config.CHECKPOINT_VERSION:
        raise FormatError(f"{label}: unsupported checkpoint version {version}", offset=reader.offset - 2)

    kind = reader.text("model kind")
    visual_dim, audio_dim, embed_dim, hidden, output_bias = reader.unpack("<IIIIB", "spec record")
    try:
        spec = ModelSpec(
            kind=kind,
            visual_dim=visual_dim,
            audio_dim=audio_dim,
            embed_dim=embed_dim,
            hidden=hidden,
            output_bias=bool(output_bias),
        )
    except ConfigError as error:
        raise CorruptCheckpointError(f"{label}: invalid spec record: {error}") from error

    # Zero-seeded skeleton fixes the expected names and shapes
    model = build(spec, seed=0)
    count = reader.u32("parameter count")
    if count != len(model.params):
        raise CorruptCheckpointError(
            f"{label}: {count} parameters stored, {spec.kind} needs {len(model.params)}"
        )

    seen = set()
    for _ in range(count):
        start = reader.offset
        name = reader.text("parameter name")
        rows, cols = reader.unpack("<II", f"shape of {name}")
        target = model.params.get(name)
        if target is None or name in seen:
            raise CorruptCheckpointError(f"{label}: unexpected parameter {name!r}", offset=start)
        if (rows, cols) != _shape_2d(target.shape):
            raise CorruptCheckpointError(
                f"{label}: {name} stored as {rows}x{cols}, expected {_shape_2d(target.shape)}",
                offset=start,
            )
        target.value = reader.f64_block(rows * cols, f"values of {name}").reshape(target.shape)
        target.zero_grad()
        seen.add(name)

    if reader.remaining:
        raise CorruptCheckpointError(
            f"{label}: {reader.remaining} trailing bytes after last parameter", offset=reader.offset
        )
    return model


def save_checkpoint(model: ModelState, path: Path) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_bytes(encode_checkpoint(model))
    logger.info(f"Saved {model.spec.kind} checkpoint to {path}")
    return path


def load_checkpoint(path: Path) -> ModelState:
    path = Path(path)
    model = decode_checkpoint(path.read_bytes(), label=str(path))
    logger.debug(f"Loaded {model.spec.kind} checkpoint from {path}")
    return model
