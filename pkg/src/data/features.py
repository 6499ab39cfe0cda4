from dataclasses import dataclass

import numpy as np

from core.errors import DimensionError, NonFiniteError

VISUAL = "visual"
AUDIO = "audio"
MODALITIES = (VISUAL, AUDIO)


@dataclass
class FeatureSequence:
    """One modality of one episode: a T x D matrix with one row per second."""

    episode_id: str
    modality: str
    matrix: np.ndarray

    def __post_init__(self) -> None:
        if self.modality not in MODALITIES:
            raise ValueError(f"Unknown modality {self.modality!r}; expected one of {MODALITIES}")
        self.matrix = np.asarray(self.matrix, dtype=np.float64)
        if self.matrix.ndim != 2:
            raise DimensionError("FeatureSequence", self.matrix.shape, detail="expected T x D")
        if self.matrix.shape[1] < 1:
            raise DimensionError("FeatureSequence", self.matrix.shape, detail="D must be >= 1")
        if not np.all(np.isfinite(self.matrix)):
            raise NonFiniteError(f"{self.modality} features of {self.episode_id!r} are not finite")

    @property
    def length(self) -> int:
        return int(self.matrix.shape[0])

    @property
    def dim(self) -> int:
        return int(self.matrix.shape[1])

    def __len__(self) -> int:
        return self.length

    def slice(self, start: int, stop: int) -> "FeatureSequence":
        return FeatureSequence(self.episode_id, self.modality, self.matrix[start:stop])
