from dataclasses import dataclass, field
from typing import Dict, List, Mapping

from core.errors import ConfigError
from numcore.params import make_rng
from utils.logger import get_logger

logger = get_logger()

SPLITS = ("train", "val", "test")
TEST_PERCENT = 20
VAL_PERCENT = 10

_SHUFFLE_STREAM = 11


@dataclass
class SplitManifest:
    """Per-category episode ids of each split."""

    train: Dict[str, List[str]] = field(default_factory=dict)
    val: Dict[str, List[str]] = field(default_factory=dict)
    test: Dict[str, List[str]] = field(default_factory=dict)

    def ids(self, split: str) -> List[str]:
        if split == "all":
            return [eid for name in SPLITS for eid in self.ids(name)]
        if split not in SPLITS:
            raise ConfigError(f"Unknown split {split!r}; expected one of {SPLITS + ('all',)}")
        per_category: Dict[str, List[str]] = getattr(self, split)
        return [eid for category in sorted(per_category) for eid in per_category[category]]

    @property
    def train_ids(self) -> List[str]:
        return self.ids("train")

    @property
    def val_ids(self) -> List[str]:
        return self.ids("val")

    @property
    def test_ids(self) -> List[str]:
        return self.ids("test")


def split_counts(n: int) -> tuple[int, int, int]:
    """(train, val, test) sizes; train takes whatever the floors leave over."""
    n_test = n * TEST_PERCENT // 100
    n_val = n * VAL_PERCENT // 100
    return n - n_test - n_val, n_val, n_test


def make_splits(categories: Mapping[str, str], seed: int) -> SplitManifest:
    """Shuffle each category's episodes with ``seed`` and cut 70/10/20 train/val/test."""
    if not categories:
        raise ValueError("Cannot split an empty episode list")

    grouped: Dict[str, List[str]] = {}
    for episode_id in sorted(categories):
        grouped.setdefault(categories[episode_id], []).append(episode_id)

    rng = make_rng(seed, _SHUFFLE_STREAM)
    manifest = SplitManifest()
    for category in sorted(grouped):
        episodes = grouped[category]
        order = [episodes[i] for i in rng.permutation(len(episodes))]
        n_train, n_val, n_test = split_counts(len(order))
        manifest.train[category] = order[:n_train]
        manifest.test[category] = order[n_train : n_train + n_test]
        manifest.val[category] = order[n_train + n_test :]
        logger.debug(f"Category {category}: {n_train} train / {n_val} val / {n_test} test")
    return manifest
