from dataclasses import dataclass
from typing import List, Optional

import numpy as np

from core.errors import DataMissingError, LengthMismatchError
from data.features import FeatureSequence


@dataclass
class Clip:
    """A contiguous window of one episode used as a training sample."""

    episode_id: str
    start: int
    target: np.ndarray
    visual: Optional[np.ndarray] = None
    audio: Optional[np.ndarray] = None

    @property
    def length(self) -> int:
        return int(self.target.shape[0])


def partition_clips(
    target: np.ndarray,
    visual: Optional[FeatureSequence] = None,
    audio: Optional[FeatureSequence] = None,
    clip_len: int = 300,
    episode_id: str = "",
) -> List[Clip]:
    """Cut an episode into consecutive disjoint clips; the shorter tail is its own clip."""
    if clip_len < 1:
        raise ValueError(f"clip_len must be >= 1, got {clip_len}")
    target = np.asarray(target, dtype=np.float64).reshape(-1)
    steps = target.shape[0]
    for name, seq in (("visual", visual), ("audio", audio)):
        if seq is not None and seq.length != steps:
            raise LengthMismatchError(
                f"Episode {episode_id!r}: {name} has {seq.length} steps, target has {steps}"
            )
    if steps == 0:
        raise DataMissingError(f"Episode {episode_id!r} has no steps")

    clips = []
    for start in range(0, steps, clip_len):
        stop = min(start + clip_len, steps)
        clips.append(
            Clip(
                episode_id=episode_id,
                start=start,
                target=target[start:stop],
                visual=None if visual is None else visual.matrix[start:stop],
                audio=None if audio is None else audio.matrix[start:stop],
            )
        )
    return clips
