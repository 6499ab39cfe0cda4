"""Clip-batched Adam training with composite-score early stopping."""

import math
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from core.errors import NonFiniteError, TrainingDivergedError
from data.store import EpisodeStore
from metrics.report import MetricReport
from models.fusion import backward_batch, forward_batch
from models.spec import ModelState
from numcore.optim import AdamOptimizer, clip_global_norm
from numcore.params import make_rng
from training.clips import Clip, partition_clips
from training.config import TrainConfig
from training.evaluate import evaluate
from training.log import EpochRecord, TrainLog
from training.loss import mse_loss
from training.splits import SplitManifest
from utils.logger import get_logger

logger = get_logger()

_EPOCH_SHUFFLE_STREAM = 23


def _stack(clips: Sequence[Clip], attribute: str) -> Optional[np.ndarray]:
    arrays = [getattr(clip, attribute) for clip in clips]
    if any(array is None for array in arrays):
        return None
    return np.stack(arrays, axis=1)


def _group_by_length(clips: Sequence[Clip]) -> List[List[Clip]]:
    groups: Dict[int, List[Clip]] = {}
    for clip in clips:
        groups.setdefault(clip.length, []).append(clip)
    return list(groups.values())


def train_step(
    model: ModelState,
    optimizer: AdamOptimizer,
    clips: Sequence[Clip],
    grad_clip_norm: float = 5.0,
) -> float:
    """One Adam update on the mean gradient of ``clips``; returns the mean per-clip loss."""
    if not clips:
        raise ValueError("train_step needs at least one clip")
    params = model.param_list()
    optimizer.zero_grad(params)
    scale = 1.0 / len(clips)
    total = 0.0
    for group in _group_by_length(clips):
        pred, cache = forward_batch(model, _stack(group, "visual"), _stack(group, "audio"))
        targets = np.stack([clip.target for clip in group], axis=1)
        loss, grads = mse_loss(pred, targets)
        total += loss
        backward_batch(model, cache, grads * scale)

    mean_loss = total * scale
    if not math.isfinite(mean_loss):
        raise TrainingDivergedError(f"Non-finite training loss {mean_loss}")
    norm = clip_global_norm(params, grad_clip_norm)
    try:
        optimizer.step(params)
    except NonFiniteError as error:
        raise TrainingDivergedError(f"{error} (gradient norm before clipping {norm:.4g})") from error
    return mean_loss


def collect_clips(
    model: ModelState, store: EpisodeStore, episode_ids: Sequence[str], clip_len: int
) -> List[Clip]:
    clips: List[Clip] = []
    for episode_id in episode_ids:
        visual, audio = store.inputs(episode_id, model.spec.modalities)
        clips.extend(
            partition_clips(store.target(episode_id), visual, audio, clip_len, episode_id=episode_id)
        )
    return clips


def _validation_ids(manifest: SplitManifest) -> List[str]:
    if manifest.val_ids:
        return manifest.val_ids
    logger.warning("Validation split is empty; early stopping on training episodes instead")
    return manifest.train_ids


def train(
    model: ModelState,
    manifest: SplitManifest,
    store: EpisodeStore,
    config: TrainConfig,
) -> Tuple[ModelState, TrainLog]:
    """Train in place and return a copy of the parameters from the best epoch."""
    clips = collect_clips(model, store, manifest.train_ids, config.clip_len_seconds)
    if not clips:
        raise ValueError("Training split is empty")
    val_ids = _validation_ids(manifest)
    logger.info(
        f"Training {model.spec.kind} ({model.parameter_count()} parameters) on {len(clips)} clips, "
        f"validating on {len(val_ids)} episodes"
    )

    optimizer = AdamOptimizer(
        lr=config.lr, beta1=config.adam_beta1, beta2=config.adam_beta2, eps=config.adam_eps
    )
    rng = make_rng(config.seed, _EPOCH_SHUFFLE_STREAM)
    log = TrainLog()
    best_model = model.clone()
    best_score = -math.inf
    best_epoch = 0

    for epoch in range(1, config.max_epochs + 1):
        order = rng.permutation(len(clips))
        losses: List[float] = []
        for batch_index, start in enumerate(range(0, len(order), config.batch)):
            batch = [clips[i] for i in order[start : start + config.batch]]
            try:
                loss = train_step(model, optimizer, batch, config.grad_clip_norm)
            except TrainingDivergedError as error:
                raise TrainingDivergedError(f"Epoch {epoch}, batch {batch_index}: {error}") from error
            logger.debug(f"epoch {epoch} batch {batch_index}: loss {loss:.6f}")
            losses.extend([loss] * len(batch))

        epoch_loss = float(np.mean(losses))
        report: MetricReport = evaluate(model, val_ids, store, config.pooling)
        improved = report.composite > best_score
        if improved:
            best_score, best_epoch = report.composite, epoch
            best_model = model.clone()
        log.append(EpochRecord.from_report(epoch, epoch_loss, report, improved))
        logger.info(
            f"epoch {epoch}: loss {epoch_loss:.4f} | val mae {report.mae:.4f} rmse {report.rmse:.4f} "
            f"rmsle {report.rmsle:.4f} srcc {report.srcc:.4f} | composite {report.composite:.4f}"
            + (" *" if improved else "")
        )
        if epoch - best_epoch >= config.patience:
            logger.info(f"Early stopping after epoch {epoch}; best epoch {best_epoch}")
            break

    return best_model, log
