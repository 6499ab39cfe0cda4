from typing import Tuple, Union

import numpy as np

from core.errors import LengthMismatchError
from models.spec import PredictionSeries


def mse_loss(
    pred: Union[PredictionSeries, np.ndarray], truth: np.ndarray
) -> Tuple[float, np.ndarray]:
    """Summed squared error and its gradient ``2 (pred - truth)`` per step."""
    p = pred.values if isinstance(pred, PredictionSeries) else np.asarray(pred, dtype=np.float64)
    y = np.asarray(truth, dtype=np.float64)
    if p.shape != y.shape:
        raise LengthMismatchError(f"Prediction shape {p.shape} does not match target {y.shape}")
    if p.size == 0:
        raise ValueError("Loss needs at least one step")
    diff = p - y
    return float(np.sum(diff * diff)), 2.0 * diff
