from typing import List, Sequence

import numpy as np

from core.errors import DegenerateSeriesError
from data.labels import EngagementRecord


def duration_normalize(record: EngagementRecord) -> np.ndarray:
    """Views per day since upload, removing the advantage of older uploads."""
    if not record.upload_age_days > 0:
        raise ValueError(
            f"{record.episode_id}: upload_age_days must be positive, got {record.upload_age_days}"
        )
    return record.views / float(record.upload_age_days)


def standardize(series: np.ndarray) -> np.ndarray:
    """Z-score with the population (1/n) variance."""
    values = np.asarray(series, dtype=np.float64).reshape(-1)
    if values.shape[0] < 2:
        raise DegenerateSeriesError(f"Cannot standardize a series of length {values.shape[0]}")
    mean = values.mean()
    centered = values - mean
    std = np.sqrt(np.mean(centered**2))
    if std <= 1e-12 * max(1.0, abs(mean)):
        raise DegenerateSeriesError("Cannot standardize a constant series")
    return centered / std


def standardize_global(series_list: Sequence[np.ndarray]) -> List[np.ndarray]:
    """Standardize several series with one shared mean and variance."""
    arrays = [np.asarray(series, dtype=np.float64).reshape(-1) for series in series_list]
    if not arrays:
        return []
    pooled = standardize(np.concatenate(arrays))
    bounds = np.cumsum([0] + [len(a) for a in arrays])
    return [pooled[start:stop] for start, stop in zip(bounds[:-1], bounds[1:])]
