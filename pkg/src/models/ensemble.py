from typing import Optional, Sequence, Tuple

import numpy as np

from core.errors import ConfigError, LengthMismatchError, ViewPulseError
from data.features import FeatureSequence
from models.fusion import forward_sequence
from models.spec import ModelState, PredictionSeries

Member = Tuple[ModelState, Optional[FeatureSequence], Optional[FeatureSequence]]


def combine_predictions(
    predictions: Sequence[PredictionSeries], weights: Optional[Sequence[float]] = None
) -> PredictionSeries:
    """Weighted per-step mean of equal-length prediction series."""
    if not predictions:
        raise ViewPulseError("Ensemble needs at least one member")
    lengths = {len(p) for p in predictions}
    if len(lengths) != 1:
        raise LengthMismatchError(f"Ensemble members disagree on length: {sorted(lengths)}")

    # averaging offsets from the first member keeps identical members exact
    anchor = predictions[0].values
    offsets = np.stack([p.values - anchor for p in predictions])
    if weights is None:
        combined = anchor + offsets.mean(axis=0)
    else:
        if len(weights) != len(predictions):
            raise ConfigError(
                f"{len(weights)} ensemble weights for {len(predictions)} members"
            )
        w = np.asarray(weights, dtype=np.float64)
        if np.any(w < 0) or w.sum() <= 0:
            raise ConfigError("Ensemble weights must be non-negative with a positive sum")
        combined = anchor + (w / w.sum()) @ offsets
    return PredictionSeries(combined, predictions[0].episode_id)


def ensemble_predict(
    members: Sequence[Member], weights: Optional[Sequence[float]] = None
) -> PredictionSeries:
    """Run every member on its own inputs and average their predictions."""
    if not members:
        raise ViewPulseError("Ensemble needs at least one member")
    predictions = [forward_sequence(model, visual, audio)[0] for model, visual, audio in members]
    return combine_predictions(predictions, weights)
