from dataclasses import dataclass, field
from typing import Dict, List

import numpy as np

from core.config import Config
from core.errors import ConfigError, NonFiniteError
from numcore.params import Param

UNIMODAL_VISUAL = "unimodal-visual"
UNIMODAL_AUDIO = "unimodal-audio"
LOW_FUSION = "low-fusion"
MID_FUSION = "mid-fusion"
HIGH_FUSION = "high-fusion"

MODEL_KINDS = (UNIMODAL_VISUAL, UNIMODAL_AUDIO, LOW_FUSION, MID_FUSION, HIGH_FUSION)
FUSION_KINDS = (LOW_FUSION, MID_FUSION, HIGH_FUSION)

# Short names accepted on the command line
KIND_ALIASES = {
    "unimodal-visual": UNIMODAL_VISUAL,
    "unimodal-audio": UNIMODAL_AUDIO,
    "low": LOW_FUSION,
    "mid": MID_FUSION,
    "high": HIGH_FUSION,
}


@dataclass(frozen=True)
class ModelSpec:
    kind: str
    visual_dim: int = 0
    audio_dim: int = 0
    embed_dim: int = Config.EMBED_DIM
    hidden: int = Config.HIDDEN_SIZE
    output_bias: bool = Config.OUTPUT_BIAS

    def __post_init__(self) -> None:
        if self.kind not in MODEL_KINDS:
            raise ConfigError(f"Unknown model kind {self.kind!r}; expected one of {MODEL_KINDS}")
        if self.visual_dim < 0 or self.audio_dim < 0:
            raise ConfigError("Modality dims must be non-negative")
        if self.embed_dim < 1 or self.hidden < 1:
            raise ConfigError("embed_dim and hidden must be >= 1")
        if self.kind == UNIMODAL_VISUAL and not (self.visual_dim > 0 and self.audio_dim == 0):
            raise ConfigError("unimodal-visual needs visual_dim > 0 and audio_dim == 0")
        if self.kind == UNIMODAL_AUDIO and not (self.audio_dim > 0 and self.visual_dim == 0):
            raise ConfigError("unimodal-audio needs audio_dim > 0 and visual_dim == 0")
        if self.kind in FUSION_KINDS and not (self.visual_dim > 0 and self.audio_dim > 0):
            raise ConfigError(f"{self.kind} needs both visual_dim and audio_dim > 0")

    @property
    def uses_visual(self) -> bool:
        return self.visual_dim > 0

    @property
    def uses_audio(self) -> bool:
        return self.audio_dim > 0

    @property
    def modalities(self) -> List[str]:
        return [
            name
            for name, used in (("visual", self.uses_visual), ("audio", self.uses_audio))
            if used
        ]


@dataclass
class ModelState:
    spec: ModelSpec
    params: Dict[str, Param] = field(default_factory=dict)

    def param_list(self) -> List[Param]:
        return list(self.params.values())

    def parameter_count(self) -> int:
        return sum(param.size for param in self.params.values())

    def zero_grad(self) -> None:
        for param in self.params.values():
            param.zero_grad()

    def clone(self) -> "ModelState":
        return ModelState(
            spec=self.spec,
            params={name: param.copy() for name, param in self.params.items()},
        )


@dataclass
class PredictionSeries:
    values: np.ndarray
    episode_id: str = ""

    def __post_init__(self) -> None:
        self.values = np.asarray(self.values, dtype=np.float64).reshape(-1)
        if not np.all(np.isfinite(self.values)):
            raise NonFiniteError(f"Prediction for {self.episode_id or '<anonymous>'} is not finite")

    def __len__(self) -> int:
        return int(self.values.shape[0])
