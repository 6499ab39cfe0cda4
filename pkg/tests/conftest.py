import pytest

from core.config import Config
from data.synthetic import SynthConfig, generate_synthetic, write_dataset


@pytest.fixture
def reset_config():
    """Reset Config between tests."""
    Config.reset()
    yield
    Config.reset()


@pytest.fixture
def small_config():
    """Two categories of three short episodes with narrow features."""
    return SynthConfig(
        n_categories=2,
        episodes_per_category=3,
        episode_len_seconds=40,
        visual_dim=4,
        audio_dim=3,
        seed=7,
    )


@pytest.fixture
def small_dataset(small_config):
    return generate_synthetic(small_config)


@pytest.fixture
def small_manifest(tmp_path, small_dataset):
    """Manifest path of ``small_dataset`` written under ``tmp_path``."""
    return write_dataset(small_dataset, tmp_path / "synth")
