"""Association between attractiveness and engagement series."""

from dataclasses import dataclass, field
from typing import List, Mapping, Optional, Sequence, Tuple

import numpy as np
from scipy.stats import rankdata

from core.errors import DegenerateSeriesError, LengthMismatchError, UndefinedCorrelationError
from data.labels import INDICATOR_DISPLAY_NAMES
from data.normalize import standardize
from utils.logger import get_logger

logger = get_logger()


def _checked(a: np.ndarray, b: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    x = np.asarray(a, dtype=np.float64).reshape(-1)
    y = np.asarray(b, dtype=np.float64).reshape(-1)
    if x.shape != y.shape:
        raise LengthMismatchError(f"Series lengths differ: {x.shape[0]} vs {y.shape[0]}")
    if x.shape[0] < 2:
        raise UndefinedCorrelationError(f"Correlation needs at least 2 points, got {x.shape[0]}")
    return x, y


def _clip_unit(value: float) -> float:
    return float(min(1.0, max(-1.0, value)))


def pcc(a: np.ndarray, b: np.ndarray) -> float:
    """Pearson correlation with the population (1/n) convention."""
    x, y = _checked(a, b)
    if np.ptp(x) == 0 or np.ptp(y) == 0:
        raise UndefinedCorrelationError("Pearson correlation is undefined for a constant series")
    xc, yc = x - x.mean(), y - y.mean()
    return _clip_unit(np.mean(xc * yc) / np.sqrt(np.mean(xc**2) * np.mean(yc**2)))


def cosine(a: np.ndarray, b: np.ndarray) -> float:
    x, y = _checked(a, b)
    norm_x, norm_y = np.linalg.norm(x), np.linalg.norm(y)
    if norm_x == 0 or norm_y == 0:
        raise UndefinedCorrelationError("Cosine similarity is undefined for a zero series")
    return _clip_unit(np.dot(x, y) / (norm_x * norm_y))


def srcc(a: np.ndarray, b: np.ndarray) -> float:
    """Spearman correlation: Pearson over average ranks, ties sharing their mean rank."""
    x, y = _checked(a, b)
    if np.ptp(x) == 0 or np.ptp(y) == 0:
        raise UndefinedCorrelationError("Spearman correlation is undefined for an all-tied series")
    return pcc(rankdata(x, method="average"), rankdata(y, method="average"))


@dataclass(frozen=True)
class CorrelationRow:
    name: str
    pcc: float
    cs: float
    srcc: float
    defined: bool = True


@dataclass
class CorrelationTable:
    rows: List[CorrelationRow] = field(default_factory=list)

    def __len__(self) -> int:
        return len(self.rows)

    def row(self, name: str) -> CorrelationRow:
        for row in self.rows:
            if row.name == name:
                return row
        raise KeyError(name)

    def prefixed(self, prefix: str) -> "CorrelationTable":
        return CorrelationTable(
            [CorrelationRow(f"{prefix}:{r.name}", r.pcc, r.cs, r.srcc, r.defined) for r in self.rows]
        )


def _row(name: str, attractiveness: np.ndarray, indicator: np.ndarray) -> CorrelationRow:
    try:
        return CorrelationRow(
            name, pcc(indicator, attractiveness), cosine(indicator, attractiveness), srcc(indicator, attractiveness)
        )
    except (UndefinedCorrelationError, DegenerateSeriesError) as error:
        logger.warning(f"Correlation for {name} undefined: {error}")
        return CorrelationRow(name, float("nan"), float("nan"), float("nan"), defined=False)


def _display(key: str) -> str:
    return INDICATOR_DISPLAY_NAMES.get(key, key)


def correlation_table(
    attractiveness: np.ndarray,
    indicators: Mapping[str, np.ndarray],
    standardize_first: bool = True,
) -> CorrelationTable:
    """One row per indicator; an undefined coefficient marks its row, never the table."""
    target = np.asarray(attractiveness, dtype=np.float64).reshape(-1)
    target_defined = True
    if standardize_first:
        try:
            target = standardize(target)
        except DegenerateSeriesError as error:
            logger.warning(f"Attractiveness cannot be standardized, every row is undefined: {error}")
            target_defined = False

    rows = []
    for key, series in indicators.items():
        values = np.asarray(series, dtype=np.float64).reshape(-1)
        if values.shape != target.shape:
            raise LengthMismatchError(
                f"Indicator {key} has {values.shape[0]} steps, attractiveness {target.shape[0]}"
            )
        if not target_defined:
            rows.append(CorrelationRow(_display(key), float("nan"), float("nan"), float("nan"), False))
            continue
        if standardize_first:
            try:
                values = standardize(values)
            except DegenerateSeriesError as error:
                logger.warning(f"Indicator {key} cannot be standardized: {error}")
                rows.append(CorrelationRow(_display(key), float("nan"), float("nan"), float("nan"), False))
                continue
        rows.append(_row(_display(key), target, values))
    return CorrelationTable(rows)


def pooled_correlation_table(
    episodes: Sequence[Tuple[np.ndarray, Mapping[str, np.ndarray]]],
    standardize_first: bool = True,
    indicator_names: Optional[Sequence[str]] = None,
) -> CorrelationTable:
    """Correlate across several episodes, standardizing each episode separately."""
    if not episodes:
        raise ValueError("No episodes to correlate")
    names = list(indicator_names or episodes[0][1].keys())

    def prepare(series: np.ndarray) -> np.ndarray:
        values = np.asarray(series, dtype=np.float64).reshape(-1)
        if not standardize_first:
            return values
        try:
            return standardize(values)
        except DegenerateSeriesError:
            # a flat episode contributes nothing around its own mean
            return np.zeros_like(values)

    targets = np.concatenate([prepare(target) for target, _ in episodes])
    pooled = {
        name: np.concatenate([prepare(indicators[name]) for _, indicators in episodes]) for name in names
    }
    return correlation_table(targets, pooled, standardize_first=False)
