from pathlib import Path
from threading import Lock
from typing import Dict, List, Optional

import numpy as np

from core.errors import ConfigError, DataMissingError, LengthMismatchError
from data.features import AUDIO, VISUAL, FeatureSequence
from data.fvseq import read_fvseq
from data.labels import EngagementRecord, read_labels
from data.manifest import ManifestEntry, read_manifest
from data.normalize import duration_normalize, standardize, standardize_global
from utils.logger import get_logger

logger = get_logger()

STANDARDIZE_SCOPES = ("episode", "global")


class EpisodeStore:
    """Lazy, thread-safe access to the episodes listed in a manifest.

    The regression target of an episode is its duration-normalized view series,
    standardized per episode or across the whole manifest.
    """

    def __init__(self, manifest_path: Path, standardize_scope: str = "episode"):
        if standardize_scope not in STANDARDIZE_SCOPES:
            raise ConfigError(
                f"standardize_scope must be one of {STANDARDIZE_SCOPES}, got {standardize_scope!r}"
            )
        self.manifest_path = Path(manifest_path)
        self.standardize_scope = standardize_scope
        self.entries: Dict[str, ManifestEntry] = {
            entry.episode_id: entry for entry in read_manifest(self.manifest_path)
        }
        self._lock = Lock()
        self._features: Dict[tuple, FeatureSequence] = {}
        self._records: Dict[str, EngagementRecord] = {}
        self._targets: Dict[str, np.ndarray] = {}

    @property
    def episode_ids(self) -> List[str]:
        return list(self.entries)

    @property
    def categories(self) -> Dict[str, str]:
        return {episode_id: entry.category for episode_id, entry in self.entries.items()}

    def entry(self, episode_id: str) -> ManifestEntry:
        try:
            return self.entries[episode_id]
        except KeyError:
            raise DataMissingError(
                f"Unknown episode {episode_id!r}; available: {', '.join(sorted(self.entries))}"
            ) from None

    def has_modality(self, modality: str) -> bool:
        """True when every episode in the manifest carries the modality."""
        return bool(self.entries) and all(
            getattr(entry, modality) is not None for entry in self.entries.values()
        )

    def has_labels(self, episode_id: str) -> bool:
        return self.entry(episode_id).labels is not None

    def features(self, episode_id: str, modality: str) -> FeatureSequence:
        key = (episode_id, modality)
        with self._lock:
            cached = self._features.get(key)
        if cached is not None:
            return cached

        path = getattr(self.entry(episode_id), modality)
        if path is None:
            raise DataMissingError(f"Episode {episode_id!r} has no {modality} features")
        if not Path(path).exists():
            raise DataMissingError(f"{modality} features of episode {episode_id!r} missing: {path}")
        seq = read_fvseq(path)
        if seq.modality != modality:
            raise DataMissingError(f"{path} holds {seq.modality} features, expected {modality}")
        with self._lock:
            self._features[key] = seq
        return seq

    def visual(self, episode_id: str) -> FeatureSequence:
        return self.features(episode_id, VISUAL)

    def audio(self, episode_id: str) -> FeatureSequence:
        return self.features(episode_id, AUDIO)

    def engagement(self, episode_id: str) -> EngagementRecord:
        with self._lock:
            cached = self._records.get(episode_id)
        if cached is not None:
            return cached

        entry = self.entry(episode_id)
        if entry.labels is None:
            raise DataMissingError(f"Episode {episode_id!r} has no label file")
        record = read_labels(entry.labels, episode_id, entry.category, entry.upload_age_days)
        with self._lock:
            self._records[episode_id] = record
        return record

    def target(self, episode_id: str) -> np.ndarray:
        with self._lock:
            cached = self._targets.get(episode_id)
        if cached is not None:
            return cached

        if self.standardize_scope == "global":
            self.engagement(episode_id)
            self._load_global_targets()
        else:
            series = standardize(duration_normalize(self.engagement(episode_id)))
            with self._lock:
                self._targets[episode_id] = series
        with self._lock:
            return self._targets[episode_id]

    def _load_global_targets(self) -> None:
        labelled = [eid for eid, entry in self.entries.items() if entry.labels is not None]
        rates = [duration_normalize(self.engagement(eid)) for eid in labelled]
        targets = dict(zip(labelled, standardize_global(rates)))
        with self._lock:
            self._targets.update(targets)

    def inputs(
        self, episode_id: str, modalities: List[str]
    ) -> tuple[Optional[FeatureSequence], Optional[FeatureSequence]]:
        """Load the requested modalities of an episode, checked for equal length."""
        visual = self.visual(episode_id) if VISUAL in modalities else None
        audio = self.audio(episode_id) if AUDIO in modalities else None
        if visual is not None and audio is not None and visual.length != audio.length:
            raise LengthMismatchError(
                f"Episode {episode_id!r}: visual has {visual.length} steps, audio {audio.length}"
            )
        return visual, audio
