from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict

import numpy as np
import pandas as pd

from core.errors import DataMissingError, FormatError, LengthMismatchError
from utils.logger import get_logger

logger = get_logger()

INDICATOR_NAMES = (
    "exit",
    "start_ff",
    "end_ff",
    "start_fr",
    "end_fr",
    "bullets",
    "bullet_likes",
    "ff_skips",
    "fr_skips",
)

# Names used in reports and correlation tables
INDICATOR_DISPLAY_NAMES = {
    "exit": "Exit",
    "start_ff": "Start-FF",
    "end_ff": "End-FF",
    "start_fr": "Start-FR",
    "end_fr": "End-FR",
    "bullets": "Bullet Screens",
    "bullet_likes": "Bullet Screen Likes",
    "ff_skips": "FF-Skips",
    "fr_skips": "FR-Skips",
}

LABEL_COLUMNS = ("second", "views") + INDICATOR_NAMES


@dataclass
class EngagementRecord:
    """Per-second views and the nine engagement indicators of one episode."""

    episode_id: str
    category: str
    upload_age_days: float
    views: np.ndarray
    indicators: Dict[str, np.ndarray] = field(default_factory=dict)

    def __post_init__(self) -> None:
        self.views = np.asarray(self.views, dtype=np.float64).reshape(-1)
        missing = [name for name in INDICATOR_NAMES if name not in self.indicators]
        if missing:
            raise DataMissingError(f"{self.episode_id}: missing indicators {missing}")
        self.indicators = {
            name: np.asarray(self.indicators[name], dtype=np.float64).reshape(-1)
            for name in INDICATOR_NAMES
        }
        lengths = {name: len(series) for name, series in self.indicators.items()}
        if any(length != len(self.views) for length in lengths.values()):
            raise LengthMismatchError(
                f"{self.episode_id}: indicator lengths {lengths} differ from views ({len(self.views)})"
            )
        if np.any(self.views < 0) or any(np.any(s < 0) for s in self.indicators.values()):
            raise ValueError(f"{self.episode_id}: counts must be non-negative")

    @property
    def length(self) -> int:
        return int(self.views.shape[0])

    def __len__(self) -> int:
        return self.length

    def to_frame(self) -> pd.DataFrame:
        frame = pd.DataFrame({"second": np.arange(self.length), "views": self.views})
        for name in INDICATOR_NAMES:
            frame[name] = self.indicators[name]
        return frame


def write_labels(record: EngagementRecord, path: Path) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    frame = record.to_frame()
    # counts are whole numbers; keep the CSV free of trailing ".0"
    for column in LABEL_COLUMNS:
        values = frame[column].to_numpy()
        if np.all(values == np.round(values)):
            frame[column] = values.astype(np.int64)
    frame.to_csv(path, index=False, columns=list(LABEL_COLUMNS))
    logger.debug(f"Wrote labels for {record.episode_id} to {path}")
    return path


def read_labels(path: Path, episode_id: str, category: str, upload_age_days: float) -> EngagementRecord:
    path = Path(path)
    if not path.exists():
        raise DataMissingError(f"Label file for episode {episode_id!r} not found: {path}")
    frame = pd.read_csv(path)
    if tuple(frame.columns) != LABEL_COLUMNS:
        raise FormatError(
            f"{path}: expected columns {','.join(LABEL_COLUMNS)}, got {','.join(map(str, frame.columns))}"
        )
    if not np.array_equal(frame["second"].to_numpy(), np.arange(len(frame))):
        raise FormatError(f"{path}: 'second' column must count 0..T-1")
    return EngagementRecord(
        episode_id=episode_id,
        category=category,
        upload_age_days=upload_age_days,
        views=frame["views"].to_numpy(dtype=np.float64),
        indicators={name: frame[name].to_numpy(dtype=np.float64) for name in INDICATOR_NAMES},
    )
