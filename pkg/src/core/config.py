import os
from pathlib import Path
from threading import Lock
from typing import Any, Mapping, Optional

from dotenv import dotenv_values

from core.errors import ConfigError


# These keys are the settings intentionally supported by key=value config files
# and command-line overrides.
CONFIGURABLE_DEFAULTS: dict[str, Any] = {
    "train.lr": 5e-4,
    "train.batch": 16,
    "train.clip_seconds": 300,
    "train.max_epochs": 100,
    "train.patience": 5,
    "train.grad_clip_norm": 5.0,
    "train.seed": 0,
    "model.hidden": 512,
    "model.embed_dim": 512,
    "model.output_bias": False,
    "adam.beta1": 0.9,
    "adam.beta2": 0.999,
    "adam.eps": 1e-8,
    "eval.pooling": "pooled",
    "ensemble.weights": "",
    "data.standardize_scope": "episode",
    "mfcc.window_ms": 25.0,
    "mfcc.hop_ms": 10.0,
    "mfcc.n_mels": 26,
    "mfcc.n_ceps": 13,
    "mfcc.preemph": 0.97,
    "mfcc.log_floor": 1e-10,
    "log.level": "",
    "log.debug": False,
}

# Internal project constants. They are exposed on Config for existing callers,
# but config files do not override them.
PROJECT_CONSTANTS: dict[str, Any] = {
    "FVSEQ_MAGIC": b"FVSEQ1",
    "CHECKPOINT_MAGIC": b"VPCKPT1",
    "CHECKPOINT_VERSION": 1,
    "THREADS_ENV_VAR": "VIEWPULSE_THREADS",
    "RMSLE_EPSILON": 1e-9,
}

_POOLING_MODES = ("pooled", "per-episode-mean")
_STANDARDIZE_SCOPES = ("episode", "global")


class Config:
    """Configuration class with class-level access support"""

    _initialized: bool = False
    _lock: Lock = Lock()
    _values: dict[str, Any] = dict(CONFIGURABLE_DEFAULTS)
    _source: Optional[Path] = None

    # Training settings
    LEARNING_RATE: float = CONFIGURABLE_DEFAULTS["train.lr"]
    BATCH_SIZE: int = CONFIGURABLE_DEFAULTS["train.batch"]
    CLIP_SECONDS: int = CONFIGURABLE_DEFAULTS["train.clip_seconds"]
    MAX_EPOCHS: int = CONFIGURABLE_DEFAULTS["train.max_epochs"]
    PATIENCE: int = CONFIGURABLE_DEFAULTS["train.patience"]
    GRAD_CLIP_NORM: float = CONFIGURABLE_DEFAULTS["train.grad_clip_norm"]
    SEED: int = CONFIGURABLE_DEFAULTS["train.seed"]

    # Model settings
    HIDDEN_SIZE: int = CONFIGURABLE_DEFAULTS["model.hidden"]
    EMBED_DIM: int = CONFIGURABLE_DEFAULTS["model.embed_dim"]
    OUTPUT_BIAS: bool = CONFIGURABLE_DEFAULTS["model.output_bias"]

    # Optimizer settings
    ADAM_BETA1: float = CONFIGURABLE_DEFAULTS["adam.beta1"]
    ADAM_BETA2: float = CONFIGURABLE_DEFAULTS["adam.beta2"]
    ADAM_EPS: float = CONFIGURABLE_DEFAULTS["adam.eps"]

    # Evaluation settings
    EVAL_POOLING: str = CONFIGURABLE_DEFAULTS["eval.pooling"]
    ENSEMBLE_WEIGHTS: Optional[list[float]] = None
    STANDARDIZE_SCOPE: str = CONFIGURABLE_DEFAULTS["data.standardize_scope"]

    # MFCC settings
    MFCC_WINDOW_MS: float = CONFIGURABLE_DEFAULTS["mfcc.window_ms"]
    MFCC_HOP_MS: float = CONFIGURABLE_DEFAULTS["mfcc.hop_ms"]
    MFCC_N_MELS: int = CONFIGURABLE_DEFAULTS["mfcc.n_mels"]
    MFCC_N_CEPS: int = CONFIGURABLE_DEFAULTS["mfcc.n_ceps"]
    MFCC_PREEMPH: float = CONFIGURABLE_DEFAULTS["mfcc.preemph"]
    MFCC_LOG_FLOOR: float = CONFIGURABLE_DEFAULTS["mfcc.log_floor"]

    # Logging settings
    LOG_LEVEL: str = CONFIGURABLE_DEFAULTS["log.level"]
    DEBUG_MODE: bool = CONFIGURABLE_DEFAULTS["log.debug"]

    # Parallelism
    THREADS: int = max(1, os.cpu_count() or 1)

    # Project constants exposed through Config
    FVSEQ_MAGIC: bytes = PROJECT_CONSTANTS["FVSEQ_MAGIC"]
    CHECKPOINT_MAGIC: bytes = PROJECT_CONSTANTS["CHECKPOINT_MAGIC"]
    CHECKPOINT_VERSION: int = PROJECT_CONSTANTS["CHECKPOINT_VERSION"]
    RMSLE_EPSILON: float = PROJECT_CONSTANTS["RMSLE_EPSILON"]

    @classmethod
    def init(
        cls,
        config_file: Optional[Path] = None,
        overrides: Optional[Mapping[str, Any]] = None,
    ) -> None:
        """Resolve defaults <- config file <- overrides.

        Thread-safe initialization using a lock; later calls are no-ops until
        ``reset`` is called.
        """
        with cls._lock:
            if cls._initialized:
                return

            values: dict[str, Any] = dict(CONFIGURABLE_DEFAULTS)
            if config_file is not None:
                values.update(cls._load_file(Path(config_file)))
                cls._source = Path(config_file)
            for key, value in (overrides or {}).items():
                if value is None:
                    continue
                cls._check_key(key)
                values[key] = value

            cls._values = values
            cls._load_all_settings()
            cls._initialized = True

    @classmethod
    def reset(cls) -> None:
        """Restore defaults so a new resolution can take place."""
        with cls._lock:
            cls._initialized = False
            cls._source = None
            cls._values = dict(CONFIGURABLE_DEFAULTS)
            cls._load_all_settings()

    @classmethod
    def _load_file(cls, path: Path) -> dict[str, Any]:
        """Load key=value pairs from a config file"""
        if not path.exists():
            raise ConfigError(f"Config file not found: {path}")

        loaded: dict[str, Any] = {}
        for key, value in dotenv_values(path).items():
            cls._check_key(key)
            loaded[key] = "" if value is None else value
        return loaded

    @staticmethod
    def _check_key(key: str) -> None:
        if key not in CONFIGURABLE_DEFAULTS:
            raise ConfigError(f"Unknown configuration key: {key}")

    @classmethod
    def _load_all_settings(cls) -> None:
        """Coerce the layered values onto typed class attributes"""
        # Training settings
        cls.LEARNING_RATE = cls._get_float("train.lr")
        cls.BATCH_SIZE = cls._get_int("train.batch")
        cls.CLIP_SECONDS = cls._get_int("train.clip_seconds")
        cls.MAX_EPOCHS = cls._get_int("train.max_epochs")
        cls.PATIENCE = cls._get_int("train.patience")
        cls.GRAD_CLIP_NORM = cls._get_float("train.grad_clip_norm")
        cls.SEED = cls._get_int("train.seed")

        # Model settings
        cls.HIDDEN_SIZE = cls._get_int("model.hidden")
        cls.EMBED_DIM = cls._get_int("model.embed_dim")
        cls.OUTPUT_BIAS = cls._get_bool("model.output_bias")

        # Optimizer settings
        cls.ADAM_BETA1 = cls._get_float("adam.beta1")
        cls.ADAM_BETA2 = cls._get_float("adam.beta2")
        cls.ADAM_EPS = cls._get_float("adam.eps")

        # Evaluation settings
        cls.EVAL_POOLING = cls._get_choice("eval.pooling", _POOLING_MODES)
        cls.ENSEMBLE_WEIGHTS = cls._get_weights("ensemble.weights")
        cls.STANDARDIZE_SCOPE = cls._get_choice(
            "data.standardize_scope", _STANDARDIZE_SCOPES
        )

        # MFCC settings
        cls.MFCC_WINDOW_MS = cls._get_float("mfcc.window_ms")
        cls.MFCC_HOP_MS = cls._get_float("mfcc.hop_ms")
        cls.MFCC_N_MELS = cls._get_int("mfcc.n_mels")
        cls.MFCC_N_CEPS = cls._get_int("mfcc.n_ceps")
        cls.MFCC_PREEMPH = cls._get_float("mfcc.preemph")
        cls.MFCC_LOG_FLOOR = cls._get_float("mfcc.log_floor")

        # Logging settings
        cls.LOG_LEVEL = cls._get_str("log.level")
        cls.DEBUG_MODE = cls._get_bool("log.debug")

        # Parallelism is capped by the environment, never by the config file
        cls.THREADS = cls._threads_from_env()

    @classmethod
    def resolved(cls) -> dict[str, str]:
        """Return the resolved configuration as sorted key=value strings."""
        return {key: cls._render(cls._values[key]) for key in sorted(cls._values)}

    @classmethod
    def write_resolved(cls, path: Path) -> Path:
        """Echo the resolved configuration so a run can be repeated verbatim."""
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        lines = [f"{key}={value}" for key, value in cls.resolved().items()]
        path.write_text("\n".join(lines) + "\n", encoding="utf-8")
        return path

    @staticmethod
    def _render(value: Any) -> str:
        if isinstance(value, bool):
            return "true" if value else "false"
        if isinstance(value, float):
            return repr(value)
        return str(value)

    @classmethod
    def _raw(cls, key: str) -> Any:
        return cls._values.get(key, CONFIGURABLE_DEFAULTS[key])

    @classmethod
    def _get_str(cls, key: str) -> str:
        """Get string value from the layered config"""
        return str(cls._raw(key)).strip()

    @classmethod
    def _get_int(cls, key: str) -> int:
        """Get integer value from the layered config"""
        value = cls._raw(key)
        if isinstance(value, bool):
            raise ConfigError(f"{key} expects an integer, got {value!r}")
        try:
            return int(str(value).strip())
        except ValueError as error:
            raise ConfigError(f"{key} expects an integer, got {value!r}") from error

    @classmethod
    def _get_float(cls, key: str) -> float:
        """Get float value from the layered config."""
        value = cls._raw(key)
        try:
            return float(str(value).strip())
        except ValueError as error:
            raise ConfigError(f"{key} expects a number, got {value!r}") from error

    @classmethod
    def _get_bool(cls, key: str) -> bool:
        """Get boolean value from the layered config"""
        value = cls._raw(key)
        if isinstance(value, bool):
            return value
        return str(value).strip().lower() in ("true", "1", "yes")

    @classmethod
    def _get_choice(cls, key: str, choices: tuple[str, ...]) -> str:
        value = cls._get_str(key)
        if value not in choices:
            raise ConfigError(f"{key} must be one of {', '.join(choices)}; got {value!r}")
        return value

    @classmethod
    def _get_weights(cls, key: str) -> Optional[list[float]]:
        text = cls._get_str(key)
        if not text:
            return None
        try:
            weights = [float(part) for part in text.split(",") if part.strip()]
        except ValueError as error:
            raise ConfigError(f"{key} expects comma-separated numbers") from error
        if not weights or any(weight < 0 for weight in weights) or sum(weights) <= 0:
            raise ConfigError(f"{key} needs non-negative weights with a positive sum")
        return weights

    @staticmethod
    def _threads_from_env() -> int:
        value = os.getenv(PROJECT_CONSTANTS["THREADS_ENV_VAR"], "")
        if value.strip().isdigit() and int(value) > 0:
            return int(value)
        return max(1, os.cpu_count() or 1)


def init_config(
    config_file: Optional[Path] = None, overrides: Optional[Mapping[str, Any]] = None
) -> None:
    """Initialize configuration (convenience function)"""
    Config.init(config_file, overrides)
