from dataclasses import dataclass, fields
from typing import Any, Dict

from core.config import Config
from core.errors import ConfigError

POOLING_MODES = ("pooled", "per-episode-mean")


@dataclass(frozen=True)
class TrainConfig:
    lr: float = 5e-4
    batch: int = 16
    clip_len_seconds: int = 300
    hidden: int = 512
    embed_dim: int = 512
    max_epochs: int = 100
    patience: int = 5
    grad_clip_norm: float = 5.0
    seed: int = 0
    pooling: str = "pooled"
    adam_beta1: float = 0.9
    adam_beta2: float = 0.999
    adam_eps: float = 1e-8

    def __post_init__(self) -> None:
        if not self.lr > 0:
            raise ConfigError(f"lr must be > 0, got {self.lr}")
        if self.batch < 1:
            raise ConfigError(f"batch must be >= 1, got {self.batch}")
        if self.clip_len_seconds < 1:
            raise ConfigError(f"clip_len_seconds must be >= 1, got {self.clip_len_seconds}")
        if self.hidden < 1 or self.embed_dim < 1:
            raise ConfigError("hidden and embed_dim must be >= 1")
        if self.max_epochs < 1:
            raise ConfigError(f"max_epochs must be >= 1, got {self.max_epochs}")
        if self.patience < 0:
            raise ConfigError(f"patience must be >= 0, got {self.patience}")
        if self.pooling not in POOLING_MODES:
            raise ConfigError(f"pooling must be one of {POOLING_MODES}, got {self.pooling!r}")

    @classmethod
    def from_config(cls) -> "TrainConfig":
        """Snapshot the resolved global configuration."""
        return cls(
            lr=Config.LEARNING_RATE,
            batch=Config.BATCH_SIZE,
            clip_len_seconds=Config.CLIP_SECONDS,
            hidden=Config.HIDDEN_SIZE,
            embed_dim=Config.EMBED_DIM,
            max_epochs=Config.MAX_EPOCHS,
            patience=Config.PATIENCE,
            grad_clip_norm=Config.GRAD_CLIP_NORM,
            seed=Config.SEED,
            pooling=Config.EVAL_POOLING,
            adam_beta1=Config.ADAM_BETA1,
            adam_beta2=Config.ADAM_BETA2,
            adam_eps=Config.ADAM_EPS,
        )

    def as_dict(self) -> Dict[str, Any]:
        return {item.name: getattr(self, item.name) for item in fields(self)}
