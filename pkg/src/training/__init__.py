"""Splits, clip batching, the MSE objective, and the training loop."""

from training.clips import Clip, partition_clips
from training.config import POOLING_MODES, TrainConfig
from training.evaluate import (
    ensemble_predictor,
    evaluate,
    evaluate_predictor,
    model_predictor,
    predict_episode,
)
from training.log import EpochRecord, TrainLog
from training.loss import mse_loss
from training.splits import SPLITS, SplitManifest, make_splits, split_counts
from training.trainer import collect_clips, train, train_step

__all__ = [
    "POOLING_MODES",
    "SPLITS",
    "Clip",
    "EpochRecord",
    "SplitManifest",
    "TrainConfig",
    "TrainLog",
    "collect_clips",
    "ensemble_predictor",
    "evaluate",
    "evaluate_predictor",
    "make_splits",
    "model_predictor",
    "mse_loss",
    "partition_clips",
    "predict_episode",
    "split_counts",
    "train",
    "train_step",
]
