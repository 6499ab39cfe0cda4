import numpy as np
import pytest

from core.errors import ConfigError
from data import (
    INDICATOR_NAMES,
    EpisodeStore,
    SynthConfig,
    duration_normalize,
    generate_linear_task,
    generate_synthetic,
    standardize,
    write_dataset,
)
from data.synthetic import ar1_series, views_from_attractiveness
from metrics import pooled_correlation_table
from numcore import make_rng


def r_squared(design: np.ndarray, target: np.ndarray) -> float:
    design = np.column_stack([design, np.ones(len(target))])
    coef, *_ = np.linalg.lstsq(design, target, rcond=None)
    residual = target - design @ coef
    return 1.0 - residual.var() / target.var()


@pytest.fixture(scope="module")
def default_dataset():
    return generate_synthetic(SynthConfig())


class TestSynthConfig:
    """Generator configuration."""

    def test_defaults(self):
        config = SynthConfig()
        assert config.n_episodes == 20
        assert config.episode_len_seconds == 600
        assert config.seed == 42

    def test_validation(self):
        with pytest.raises(ConfigError):
            SynthConfig(visual_dim=0)
        with pytest.raises(ConfigError):
            SynthConfig(target_noise=-0.1)
        with pytest.raises(ConfigError):
            SynthConfig(episode_len_seconds=1)

    def test_two_second_episode_generates(self):
        config = SynthConfig(n_categories=1, episodes_per_category=1, episode_len_seconds=2)
        dataset = generate_synthetic(config)
        assert dataset.attractiveness["ep000"].shape == (2,)


class TestGenerator:
    """Structure and determinism of the synthetic dataset."""

    def test_deterministic(self, small_config):
        a, b = generate_synthetic(small_config), generate_synthetic(small_config)
        assert a.episode_ids == b.episode_ids
        for eid in a.episode_ids:
            np.testing.assert_array_equal(a.visual[eid].matrix, b.visual[eid].matrix)
            np.testing.assert_array_equal(a.audio[eid].matrix, b.audio[eid].matrix)
            np.testing.assert_array_equal(a.records[eid].views, b.records[eid].views)
            assert a.records[eid].upload_age_days == b.records[eid].upload_age_days

    def test_seed_matters(self, small_config):
        other = SynthConfig(**{**small_config.__dict__, "seed": small_config.seed + 1})
        a, b = generate_synthetic(small_config), generate_synthetic(other)
        assert not np.array_equal(a.visual["ep000"].matrix, b.visual["ep000"].matrix)

    def test_shapes_and_ids(self, small_dataset, small_config):
        assert small_dataset.episode_ids == [f"ep{i:03d}" for i in range(6)]
        assert small_dataset.categories["ep002"] == "cat0"
        assert small_dataset.categories["ep003"] == "cat1"
        visual = small_dataset.visual["ep004"]
        assert (visual.length, visual.dim) == (40, small_config.visual_dim)
        assert small_dataset.audio["ep004"].dim == small_config.audio_dim
        record = small_dataset.records["ep004"]
        assert 1.0 <= record.upload_age_days <= 60.0
        assert np.all(record.views >= 0)
        assert np.all(record.views == np.round(record.views))

    def test_target_explained_by_latents(self, default_dataset):
        for eid in default_dataset.episode_ids[:5]:
            u, v = default_dataset.latents[eid]
            y = default_dataset.attractiveness[eid]
            assert r_squared(np.column_stack([u, v]), y) > 0.9

    def test_each_modality_carries_one_latent(self, default_dataset):
        # the mixing matrices are shared, so episodes can be pooled
        ids = default_dataset.episode_ids
        u = np.concatenate([default_dataset.latents[eid][0] for eid in ids])
        v = np.concatenate([default_dataset.latents[eid][1] for eid in ids])
        visual = np.vstack([default_dataset.visual[eid].matrix for eid in ids])
        audio = np.vstack([default_dataset.audio[eid].matrix for eid in ids])
        assert r_squared(visual, u) > 0.9
        assert r_squared(audio, v) > 0.9
        assert r_squared(visual, v) < 0.2
        assert r_squared(audio, u) < 0.2

    def test_views_recover_attractiveness(self, default_dataset):
        eid = default_dataset.episode_ids[3]
        record = default_dataset.records[eid]
        recovered = standardize(duration_normalize(record))
        expected = standardize(default_dataset.attractiveness[eid])
        assert np.corrcoef(recovered, expected)[0, 1] > 0.999

    def test_indicator_sign_structure(self, default_dataset):
        episodes = [
            (duration_normalize(default_dataset.records[eid]), default_dataset.records[eid].indicators)
            for eid in default_dataset.episode_ids
        ]
        table = pooled_correlation_table(episodes, indicator_names=INDICATOR_NAMES)
        negative = ("Exit", "Start-FF", "End-FF", "Bullet Screens", "FF-Skips")
        positive = ("Start-FR", "End-FR")
        for name in negative:
            assert table.row(name).pcc < 0, name
        for name in positive:
            assert table.row(name).pcc > 0, name
        for name in ("Bullet Screen Likes", "FR-Skips"):
            assert abs(table.row(name).pcc) < 0.1, name


class TestHelpers:
    """Building blocks of the generator."""

    def test_ar1_is_smooth_with_unit_variance(self):
        series = ar1_series(make_rng(0), 100000)
        assert series.var() == pytest.approx(1.0, abs=0.15)
        lag_one = np.corrcoef(series[:-1], series[1:])[0, 1]
        assert lag_one == pytest.approx(0.95, abs=0.02)

    def test_views_from_attractiveness(self):
        views = views_from_attractiveness(np.array([0.0, 1.0, -10.0]), 2.0)
        np.testing.assert_array_equal(views, [1000.0, 1200.0, 0.0])

    def test_linear_task_is_exact(self):
        dataset = generate_linear_task(n_episodes=2, episode_len_seconds=30, dim=3, seed=1)
        assert dataset.audio == {}
        x0 = dataset.visual["ep000"].matrix
        x1 = dataset.visual["ep001"].matrix
        y0, y1 = dataset.attractiveness["ep000"], dataset.attractiveness["ep001"]
        weights, *_ = np.linalg.lstsq(np.vstack([x0, x1]), np.concatenate([y0, y1]), rcond=None)
        np.testing.assert_allclose(np.vstack([x0, x1]) @ weights, np.concatenate([y0, y1]), atol=1e-10)
        assert np.linalg.norm(weights) == pytest.approx(1.0)


class TestWriteDataset:
    """On-disk layout."""

    def test_layout(self, tmp_path, small_dataset):
        manifest = write_dataset(small_dataset, tmp_path / "data")
        assert manifest == tmp_path / "data" / "manifest.csv"
        assert len(list((tmp_path / "data" / "visual").glob("*.fvseq"))) == 6
        assert len(list((tmp_path / "data" / "audio").glob("*.fvseq"))) == 6
        assert len(list((tmp_path / "data" / "labels").glob("*.csv"))) == 6

    def test_store_reads_back(self, small_manifest, small_dataset):
        store = EpisodeStore(small_manifest)
        record = store.engagement("ep005")
        np.testing.assert_array_equal(record.views, small_dataset.records["ep005"].views)
        for name in INDICATOR_NAMES:
            np.testing.assert_array_equal(record.indicators[name], small_dataset.records["ep005"].indicators[name])

    def test_visual_only_dataset(self, tmp_path):
        manifest = write_dataset(generate_linear_task(n_episodes=2, episode_len_seconds=10), tmp_path)
        store = EpisodeStore(manifest)
        assert store.has_modality("visual")
        assert not store.has_modality("audio")
