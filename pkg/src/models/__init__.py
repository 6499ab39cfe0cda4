"""The five attractiveness architectures, their ensemble, and checkpoints."""

from models.checkpoint import decode_checkpoint, encode_checkpoint, load_checkpoint, save_checkpoint
from models.ensemble import combine_predictions, ensemble_predict
from models.fusion import ForwardCache, backward_batch, backward_sequence, build, forward_batch, forward_sequence
from models.spec import (
    FUSION_KINDS,
    HIGH_FUSION,
    KIND_ALIASES,
    LOW_FUSION,
    MID_FUSION,
    MODEL_KINDS,
    UNIMODAL_AUDIO,
    UNIMODAL_VISUAL,
    ModelSpec,
    ModelState,
    PredictionSeries,
)

__all__ = [
    "FUSION_KINDS",
    "HIGH_FUSION",
    "KIND_ALIASES",
    "LOW_FUSION",
    "MID_FUSION",
    "MODEL_KINDS",
    "UNIMODAL_AUDIO",
    "UNIMODAL_VISUAL",
    "ForwardCache",
    "ModelSpec",
    "ModelState",
    "PredictionSeries",
    "backward_batch",
    "backward_sequence",
    "build",
    "combine_predictions",
    "decode_checkpoint",
    "encode_checkpoint",
    "ensemble_predict",
    "forward_batch",
    "forward_sequence",
    "load_checkpoint",
    "save_checkpoint",
]
