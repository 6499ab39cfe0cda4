"""Centralized user-facing command-line copy.

Log messages stay with the code that emits them. This module owns the help
text, usage errors and summaries that the command line prints.
"""

from __future__ import annotations

from pathlib import Path
from typing import Iterable


class CliTexts:
    """Command-line help and result copy."""

    PROG = "viewpulse"
    DESCRIPTION = (
        "Fine-grained video attractiveness prediction from visual and audio "
        "features: synthetic data, MFCC extraction, training, evaluation and "
        "engagement correlation."
    )
    CONFIG_HELP = "key=value configuration file layered under command-line flags"
    LOG_LEVEL_HELP = "log level for stderr output (DEBUG, INFO, WARNING, ERROR)"

    COMMAND_HELP = {
        "gen-synth": "write a deterministic synthetic dataset (manifest, features, labels)",
        "mfcc": "extract per-second stereo MFCC features from a WAV file",
        "train": "train one architecture and write checkpoint, train log and resolved config",
        "evaluate": "score checkpoints (and their ensemble) on a split of a manifest",
        "correlate": "correlate attractiveness with the nine engagement indicators",
        "predict": "write the per-second prediction of one episode",
    }

    FLAG_HELP = {
        "out_dir": "output directory",
        "out_file": "output file",
        "seed": "random seed",
        "episodes": "total number of episodes (a multiple of --categories)",
        "categories": "number of episode categories",
        "seconds": "length of each episode in seconds",
        "visual_dim": "visual feature dimension",
        "audio_dim": "audio feature dimension",
        "wav": "input WAV file (16-bit PCM or IEEE float, mono or stereo)",
        "episode_id": "episode id stored in the feature file",
        "manifest": "episode manifest CSV",
        "model": "architecture to train",
        "lr": "Adam learning rate",
        "batch": "clips per batch",
        "hidden": "LSTM hidden size",
        "embed_dim": "embedding size",
        "clip_seconds": "training clip length in seconds",
        "patience": "epochs without composite improvement before stopping",
        "max_epochs": "upper bound on training epochs",
        "grad_clip_norm": "global gradient-norm clip (<= 0 disables)",
        "pooling": "pool metrics over all steps or average them per episode",
        "split": "which split of the manifest to evaluate",
        "checkpoints": "comma-separated checkpoint files",
        "weights": "comma-separated ensemble weights, one per checkpoint",
        "raw": "correlate raw series instead of per-episode standardized ones",
        "by_category": "one block of rows per category",
        "checkpoint": "checkpoint file",
        "episode": "episode id to predict",
    }

    @staticmethod
    def must_be_positive(value: str) -> str:
        return f"expected a positive integer, got {value!r}"

    @staticmethod
    def must_be_at_least(value: str, minimum: int) -> str:
        return f"expected an integer >= {minimum}, got {value!r}"

    @staticmethod
    def must_be_non_negative(value: str) -> str:
        return f"expected a non-negative integer, got {value!r}"

    @staticmethod
    def episodes_not_divisible(episodes: int, categories: int) -> str:
        return f"--episodes ({episodes}) must be a multiple of --categories ({categories})"

    @staticmethod
    def runtime_error(message: str) -> str:
        return f"Error: {message}"

    @staticmethod
    def dataset_written(manifest: Path, episodes: int) -> str:
        return f"Wrote {episodes} episodes; manifest: {manifest}"

    @staticmethod
    def features_written(path: Path, length: int, dim: int) -> str:
        return f"Wrote {path} (T={length}, D={dim})"

    @staticmethod
    def training_finished(checkpoint: Path, best_epoch: int, epochs: int, composite: float) -> str:
        return (
            f"Best epoch {best_epoch} of {epochs} (validation composite {composite:.4f}); "
            f"checkpoint: {checkpoint}"
        )

    @staticmethod
    def report_written(path: Path, rows: int) -> str:
        return f"Wrote {rows} report row(s) to {path}"

    @staticmethod
    def table_written(path: Path, rows: int) -> str:
        return f"Wrote {rows} correlation row(s) to {path}"

    @staticmethod
    def prediction_written(path: Path, episode: str, rows: int) -> str:
        return f"Wrote {rows} predicted seconds of {episode} to {path}"

    @staticmethod
    def missing_modalities(kind: str, modalities: Iterable[str]) -> str:
        return f"{kind} needs {', '.join(modalities)} features for every episode in the manifest"
