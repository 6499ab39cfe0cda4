from typing import Tuple

import numpy as np

from core.config import Config
from core.errors import LengthMismatchError


def paired(pred: np.ndarray, truth: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """Flatten two series to float64 and check they can be compared step by step."""
    p = np.asarray(pred, dtype=np.float64).reshape(-1)
    y = np.asarray(truth, dtype=np.float64).reshape(-1)
    if p.shape != y.shape:
        raise LengthMismatchError(f"Series lengths differ: {p.shape[0]} vs {y.shape[0]}")
    if p.shape[0] == 0:
        raise ValueError("Metrics need at least one step")
    return p, y


def mae(pred: np.ndarray, truth: np.ndarray) -> float:
    p, y = paired(pred, truth)
    return float(np.mean(np.abs(p - y)))


def rmse(pred: np.ndarray, truth: np.ndarray) -> float:
    p, y = paired(pred, truth)
    return float(np.sqrt(np.mean((p - y) ** 2)))


def rmsle_with_clamps(
    pred: np.ndarray, truth: np.ndarray, eps: float = Config.RMSLE_EPSILON
) -> Tuple[float, int]:
    """RMSLE together with the number of entries whose ``1 + x`` hit the floor."""
    p, y = paired(pred, truth)
    shifted_p, shifted_y = 1.0 + p, 1.0 + y
    clamped = int(np.count_nonzero(shifted_p < eps) + np.count_nonzero(shifted_y < eps))
    diff = np.log(np.maximum(shifted_p, eps)) - np.log(np.maximum(shifted_y, eps))
    return float(np.sqrt(np.mean(diff**2))), clamped


def rmsle(pred: np.ndarray, truth: np.ndarray, eps: float = Config.RMSLE_EPSILON) -> float:
    return rmsle_with_clamps(pred, truth, eps)[0]
