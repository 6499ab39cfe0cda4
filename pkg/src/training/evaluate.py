from concurrent.futures import ThreadPoolExecutor
from typing import Callable, List, Optional, Sequence

import numpy as np

from core.config import Config
from data.store import EpisodeStore
from metrics.report import MetricReport, average_reports, compute_report
from models.ensemble import combine_predictions
from models.fusion import forward_sequence
from models.spec import ModelState, PredictionSeries
from utils.logger import get_logger

logger = get_logger()

Predictor = Callable[[str], PredictionSeries]


def predict_episode(model: ModelState, store: EpisodeStore, episode_id: str) -> PredictionSeries:
    """Run a model over one whole episode without any partitioning."""
    visual, audio = store.inputs(episode_id, model.spec.modalities)
    prediction, _ = forward_sequence(model, visual, audio)
    return prediction


def model_predictor(model: ModelState, store: EpisodeStore) -> Predictor:
    return lambda episode_id: predict_episode(model, store, episode_id)


def ensemble_predictor(
    models: Sequence[ModelState], store: EpisodeStore, weights: Optional[Sequence[float]] = None
) -> Predictor:
    def predict(episode_id: str) -> PredictionSeries:
        members = [predict_episode(model, store, episode_id) for model in models]
        return combine_predictions(members, weights)

    return predict


def _run_all(predict: Predictor, episode_ids: List[str], threads: int) -> List[PredictionSeries]:
    workers = max(1, min(threads, len(episode_ids)))
    if workers == 1:
        return [predict(episode_id) for episode_id in episode_ids]
    # map keeps input order, so results do not depend on scheduling
    with ThreadPoolExecutor(max_workers=workers, thread_name_prefix="viewpulse-eval") as pool:
        return list(pool.map(predict, episode_ids))


def evaluate_predictor(
    predict: Predictor,
    episode_ids: Sequence[str],
    store: EpisodeStore,
    pooling: str = "pooled",
    threads: Optional[int] = None,
) -> MetricReport:
    if not episode_ids:
        raise ValueError("No episodes to evaluate")
    ordered = sorted(episode_ids)
    predictions = _run_all(predict, ordered, threads or Config.THREADS)
    truths = [store.target(episode_id) for episode_id in ordered]

    if pooling == "per-episode-mean":
        return average_reports([compute_report(p.values, y) for p, y in zip(predictions, truths)])
    return compute_report(
        np.concatenate([p.values for p in predictions]), np.concatenate(truths)
    )


def evaluate(
    model: ModelState,
    episode_ids: Sequence[str],
    store: EpisodeStore,
    pooling: str = "pooled",
    threads: Optional[int] = None,
) -> MetricReport:
    """Forward each whole episode and score the predictions against its target."""
    report = evaluate_predictor(model_predictor(model, store), episode_ids, store, pooling, threads)
    logger.debug(
        f"Evaluated {model.spec.kind} on {len(episode_ids)} episodes: "
        f"srcc={report.srcc:.4f} mae={report.mae:.4f} composite={report.composite:.4f}"
    )
    return report
