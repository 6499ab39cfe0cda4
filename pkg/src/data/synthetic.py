"""Deterministic stand-in for a proprietary per-second attractiveness dataset.

Each episode has two smooth latent signals ``u`` and ``v``. Visual features
carry ``u``, audio features carry ``v`` and attractiveness mixes both, so only
a model that sees both modalities can explain all of the target.
"""

from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, List, Optional, Tuple

import numpy as np
from scipy.signal import lfilter

from core.errors import ConfigError
from data.features import AUDIO, VISUAL, FeatureSequence
from data.fvseq import write_fvseq
from data.labels import INDICATOR_NAMES, EngagementRecord, write_labels
from data.manifest import ManifestEntry, write_manifest
from data.normalize import standardize
from numcore.params import make_rng
from utils.logger import get_logger

logger = get_logger()

AR_COEFFICIENT = 0.95

# Coupling of each indicator to attractiveness; the sign is what matters.
INDICATOR_COUPLING = {
    "exit": -0.149,
    "start_ff": -0.117,
    "end_ff": -0.537,
    "start_fr": 0.327,
    "end_fr": 0.227,
    "bullets": -0.139,
    "bullet_likes": 0.027,
    "ff_skips": -0.351,
    "fr_skips": 0.022,
}

INDICATOR_BASE = 50.0
INDICATOR_SCALE = 10.0
VIEWS_BASE = 500.0
VIEWS_SCALE = 100.0
MAX_UPLOAD_AGE_DAYS = 60.0

# Sub-stream ids for the counter-based generator
_MIXING_STREAM = 0
_EPISODE_STREAM = 1


@dataclass(frozen=True)
class SynthConfig:
    n_categories: int = 2
    episodes_per_category: int = 10
    episode_len_seconds: int = 600
    visual_dim: int = 16
    audio_dim: int = 26
    target_noise: float = 0.1
    feature_noise: float = 0.05
    seed: int = 42

    def __post_init__(self) -> None:
        for name in ("n_categories", "episodes_per_category", "episode_len_seconds", "visual_dim", "audio_dim"):
            if getattr(self, name) < 1:
                raise ConfigError(f"SynthConfig.{name} must be >= 1, got {getattr(self, name)}")
        if self.episode_len_seconds < 2:
            raise ConfigError(f"SynthConfig.episode_len_seconds must be >= 2, got {self.episode_len_seconds}")
        if self.target_noise < 0 or self.feature_noise < 0:
            raise ConfigError("SynthConfig noise levels must be non-negative")

    @property
    def n_episodes(self) -> int:
        return self.n_categories * self.episodes_per_category


@dataclass
class SyntheticDataset:
    config: SynthConfig
    categories: Dict[str, str] = field(default_factory=dict)
    visual: Dict[str, FeatureSequence] = field(default_factory=dict)
    audio: Dict[str, FeatureSequence] = field(default_factory=dict)
    records: Dict[str, EngagementRecord] = field(default_factory=dict)
    attractiveness: Dict[str, np.ndarray] = field(default_factory=dict)
    latents: Dict[str, Tuple[np.ndarray, np.ndarray]] = field(default_factory=dict)

    @property
    def episode_ids(self) -> List[str]:
        return list(self.categories)


def ar1_series(rng: np.random.Generator, length: int, coefficient: float = AR_COEFFICIENT) -> np.ndarray:
    """Stationary AR(1) path with unit variance."""
    innovations = rng.standard_normal(length)
    start = rng.standard_normal()
    gain = np.sqrt(1.0 - coefficient**2)
    series, _ = lfilter([gain], [1.0, -coefficient], innovations, zi=[coefficient * start])
    return series


def _orthogonal(rng: np.random.Generator, dim: int) -> np.ndarray:
    q, r = np.linalg.qr(rng.standard_normal((dim, dim)))
    return q * np.sign(np.diag(r))


def _mixed_features(
    rng: np.random.Generator, latent: np.ndarray, mixing: np.ndarray, noise: float
) -> np.ndarray:
    length, dim = latent.shape[0], mixing.shape[0]
    sources = np.column_stack([latent, rng.standard_normal((length, dim - 1))])
    return sources @ mixing.T + noise * rng.standard_normal((length, dim))


def views_from_attractiveness(attractiveness: np.ndarray, upload_age_days: float) -> np.ndarray:
    """Integer view counts whose per-day rate is affine in attractiveness."""
    rate = VIEWS_BASE + VIEWS_SCALE * attractiveness
    return np.clip(np.round(upload_age_days * rate), 0, None)


def engagement_indicators(rng: np.random.Generator, attractiveness: np.ndarray) -> Dict[str, np.ndarray]:
    z = standardize(attractiveness)
    indicators = {}
    for name in INDICATOR_NAMES:
        coupling = INDICATOR_COUPLING[name]
        signal = coupling * z + np.sqrt(1.0 - coupling**2) * rng.standard_normal(z.shape[0])
        indicators[name] = np.clip(np.round(INDICATOR_BASE + INDICATOR_SCALE * signal), 0, None)
    return indicators


def _episode_ids(config: SynthConfig) -> List[Tuple[str, str]]:
    pairs = []
    for index in range(config.n_episodes):
        category = f"cat{index // config.episodes_per_category}"
        pairs.append((f"ep{index:03d}", category))
    return pairs


def generate_synthetic(config: Optional[SynthConfig] = None) -> SyntheticDataset:
    """Build the whole dataset as a pure function of ``config``."""
    config = config or SynthConfig()
    mixing_rng = make_rng(config.seed, _MIXING_STREAM)
    visual_mixing = _orthogonal(mixing_rng, config.visual_dim)
    audio_mixing = _orthogonal(mixing_rng, config.audio_dim)

    dataset = SyntheticDataset(config=config)
    for index, (episode_id, category) in enumerate(_episode_ids(config)):
        rng = make_rng(config.seed, _EPISODE_STREAM, index)
        length = config.episode_len_seconds
        u = ar1_series(rng, length)
        v = ar1_series(rng, length)
        y = 0.5 * u + 0.5 * v + config.target_noise * rng.standard_normal(length)
        age = float(rng.uniform(1.0, MAX_UPLOAD_AGE_DAYS))

        dataset.categories[episode_id] = category
        dataset.latents[episode_id] = (u, v)
        dataset.attractiveness[episode_id] = y
        dataset.visual[episode_id] = FeatureSequence(
            episode_id, VISUAL, _mixed_features(rng, u, visual_mixing, config.feature_noise)
        )
        dataset.audio[episode_id] = FeatureSequence(
            episode_id, AUDIO, _mixed_features(rng, v, audio_mixing, config.feature_noise)
        )
        dataset.records[episode_id] = EngagementRecord(
            episode_id=episode_id,
            category=category,
            upload_age_days=age,
            views=views_from_attractiveness(y, age),
            indicators=engagement_indicators(rng, y),
        )

    logger.info(
        f"Generated {config.n_episodes} synthetic episodes of {config.episode_len_seconds}s "
        f"(seed {config.seed})"
    )
    return dataset


def generate_linear_task(
    n_episodes: int = 4,
    episode_len_seconds: int = 60,
    dim: int = 4,
    seed: int = 0,
) -> SyntheticDataset:
    """Visual-only dataset whose attractiveness is exactly ``w . x_t``."""
    config = SynthConfig(
        n_categories=1,
        episodes_per_category=n_episodes,
        episode_len_seconds=episode_len_seconds,
        visual_dim=dim,
        audio_dim=1,
        target_noise=0.0,
        feature_noise=0.0,
        seed=seed,
    )
    rng = make_rng(seed, _MIXING_STREAM)
    weights = rng.standard_normal(dim)
    weights /= np.linalg.norm(weights)

    dataset = SyntheticDataset(config=config)
    for index, (episode_id, category) in enumerate(_episode_ids(config)):
        episode_rng = make_rng(seed, _EPISODE_STREAM, index)
        x = episode_rng.standard_normal((episode_len_seconds, dim))
        y = x @ weights
        age = float(episode_rng.uniform(1.0, MAX_UPLOAD_AGE_DAYS))
        dataset.categories[episode_id] = category
        dataset.attractiveness[episode_id] = y
        dataset.visual[episode_id] = FeatureSequence(episode_id, VISUAL, x)
        dataset.records[episode_id] = EngagementRecord(
            episode_id=episode_id,
            category=category,
            upload_age_days=age,
            views=views_from_attractiveness(y, age),
            indicators=engagement_indicators(episode_rng, y),
        )
    return dataset


def write_dataset(dataset: SyntheticDataset, out_dir: Path) -> Path:
    """Lay the dataset out as ``manifest.csv`` plus per-modality and label files."""
    out_dir = Path(out_dir)
    entries = []
    for episode_id in dataset.episode_ids:
        visual_path = audio_path = None
        if episode_id in dataset.visual:
            visual_path = write_fvseq(dataset.visual[episode_id], out_dir / "visual" / f"{episode_id}.fvseq")
        if episode_id in dataset.audio:
            audio_path = write_fvseq(dataset.audio[episode_id], out_dir / "audio" / f"{episode_id}.fvseq")
        record = dataset.records[episode_id]
        labels_path = write_labels(record, out_dir / "labels" / f"{episode_id}.csv")
        entries.append(
            ManifestEntry(
                episode_id=episode_id,
                category=dataset.categories[episode_id],
                upload_age_days=record.upload_age_days,
                visual=visual_path,
                audio=audio_path,
                labels=labels_path,
            )
        )
    manifest_path = write_manifest(entries, out_dir / "manifest.csv")
    logger.info(f"Wrote {len(entries)} episodes to {out_dir}")
    return manifest_path
