import numpy as np
import pytest

from core.config import Config
from core.errors import (
    ConfigError,
    DataMissingError,
    LengthMismatchError,
    TrainingDivergedError,
)
from data import EpisodeStore, generate_linear_task, write_dataset
from data.features import VISUAL, FeatureSequence
from metrics import average_reports, compute_report
from models import (
    MID_FUSION,
    UNIMODAL_VISUAL,
    ModelSpec,
    PredictionSeries,
    build,
    encode_checkpoint,
    forward_batch,
)
from numcore import AdamOptimizer
from training import (
    EpochRecord,
    SplitManifest,
    TrainConfig,
    TrainLog,
    collect_clips,
    ensemble_predictor,
    evaluate,
    evaluate_predictor,
    make_splits,
    mse_loss,
    partition_clips,
    predict_episode,
    split_counts,
    train,
    train_step,
)


def visual_seq(matrix: np.ndarray, episode_id: str = "ep") -> FeatureSequence:
    return FeatureSequence(episode_id, VISUAL, matrix)


def small_fusion_spec() -> ModelSpec:
    return ModelSpec(kind=MID_FUSION, visual_dim=4, audio_dim=3, embed_dim=4, hidden=4)


def clip_loss(model, clips) -> float:
    total = 0.0
    for clip in clips:
        pred, _ = forward_batch(model, clip.visual, clip.audio)
        total += mse_loss(pred, clip.target)[0]
    return total / len(clips)


class TestSplits:
    """Per-category train/val/test partition."""

    def test_counts(self):
        assert split_counts(10) == (7, 1, 2)
        assert split_counts(1) == (1, 0, 0)
        assert split_counts(20) == (14, 2, 4)

    def test_ten_episodes_one_category(self):
        categories = {f"ep{i}": "cat0" for i in range(10)}
        manifest = make_splits(categories, seed=0)
        assert (len(manifest.train_ids), len(manifest.val_ids), len(manifest.test_ids)) == (7, 1, 2)

    def test_single_episode_goes_to_train(self):
        manifest = make_splits({"only": "cat0"}, seed=3)
        assert manifest.train_ids == ["only"]
        assert manifest.val_ids == []
        assert manifest.test_ids == []

    def test_disjoint_partition(self):
        categories = {f"ep{i:02d}": f"cat{i % 3}" for i in range(23)}
        manifest = make_splits(categories, seed=5)
        everything = manifest.ids("all")
        assert sorted(everything) == sorted(categories)
        assert len(set(everything)) == len(everything)
        for split in ("train", "val", "test"):
            for category, ids in getattr(manifest, split).items():
                assert all(categories[eid] == category for eid in ids)

    def test_deterministic_per_seed(self):
        categories = {f"ep{i:02d}": "cat0" for i in range(30)}
        assert make_splits(categories, seed=1) == make_splits(categories, seed=1)
        assert make_splits(categories, seed=1).train_ids != make_splits(categories, seed=2).train_ids

    def test_input_order_does_not_matter(self):
        categories = {f"ep{i:02d}": "cat0" for i in range(10)}
        reversed_categories = dict(reversed(list(categories.items())))
        assert make_splits(categories, seed=4) == make_splits(reversed_categories, seed=4)

    def test_unknown_split(self):
        with pytest.raises(ConfigError):
            SplitManifest().ids("holdout")

    def test_empty(self):
        with pytest.raises(ValueError):
            make_splits({}, seed=0)


class TestPartitionClips:
    """Cutting episodes into training clips."""

    def test_whole_clips(self):
        clips = partition_clips(np.zeros(2700), clip_len=300)
        assert len(clips) == 9
        assert all(clip.length == 300 for clip in clips)
        assert [clip.start for clip in clips] == list(range(0, 2700, 300))

    def test_short_episode_is_one_clip(self):
        clips = partition_clips(np.zeros(299), clip_len=300)
        assert len(clips) == 1
        assert clips[0].length == 299

    def test_remainder_kept(self):
        clips = partition_clips(np.zeros(650), clip_len=300)
        assert [clip.length for clip in clips] == [300, 300, 50]

    def test_concatenation_reconstructs_episode(self):
        rng = np.random.default_rng(0)
        target, features = rng.standard_normal(23), rng.standard_normal((23, 4))
        clips = partition_clips(target, visual_seq(features), clip_len=5, episode_id="ep")
        np.testing.assert_array_equal(np.concatenate([c.target for c in clips]), target)
        np.testing.assert_array_equal(np.vstack([c.visual for c in clips]), features)
        assert all(c.audio is None and c.episode_id == "ep" for c in clips)

    def test_empty_episode(self):
        with pytest.raises(DataMissingError):
            partition_clips(np.zeros(0), clip_len=10)

    def test_length_mismatch(self):
        with pytest.raises(LengthMismatchError):
            partition_clips(np.zeros(10), visual_seq(np.zeros((9, 2))), clip_len=5)

    def test_bad_clip_len(self):
        with pytest.raises(ValueError):
            partition_clips(np.zeros(10), clip_len=0)


class TestMseLoss:
    """Summed squared error objective."""

    def test_example(self):
        loss, grads = mse_loss(np.array([1.0, 2.0]), np.array([0.0, 0.0]))
        assert loss == 5.0
        np.testing.assert_array_equal(grads, [2.0, 4.0])

    def test_matches_scalar_loop(self):
        rng = np.random.default_rng(1)
        p, y = rng.standard_normal(50), rng.standard_normal(50)
        loss, grads = mse_loss(PredictionSeries(p), y)
        assert loss == pytest.approx(sum((a - b) ** 2 for a, b in zip(p, y)), abs=1e-12)
        np.testing.assert_allclose(grads, [2 * (a - b) for a, b in zip(p, y)], atol=1e-12)

    def test_batched_shape(self):
        loss, grads = mse_loss(np.ones((4, 3)), np.zeros((4, 3)))
        assert loss == 12.0
        assert grads.shape == (4, 3)

    def test_length_mismatch(self):
        with pytest.raises(LengthMismatchError):
            mse_loss(np.zeros(3), np.zeros(4))

    def test_empty(self):
        with pytest.raises(ValueError):
            mse_loss(np.zeros(0), np.zeros(0))


class TestTrainConfig:
    """Hyperparameter validation and config snapshot."""

    def test_defaults(self):
        config = TrainConfig()
        assert (config.lr, config.batch, config.clip_len_seconds) == (5e-4, 16, 300)
        assert (config.hidden, config.embed_dim) == (512, 512)
        assert config.pooling == "pooled"

    @pytest.mark.parametrize(
        "overrides",
        [
            {"lr": 0.0},
            {"batch": 0},
            {"clip_len_seconds": 0},
            {"max_epochs": 0},
            {"patience": -1},
            {"hidden": 0},
            {"pooling": "median"},
        ],
    )
    def test_rejects(self, overrides):
        with pytest.raises(ConfigError):
            TrainConfig(**overrides)

    def test_from_config(self, reset_config):
        Config.init(overrides={"train.lr": "0.01", "train.patience": "2", "eval.pooling": "per-episode-mean"})
        config = TrainConfig.from_config()
        assert config.lr == 0.01
        assert config.patience == 2
        assert config.pooling == "per-episode-mean"

    def test_as_dict(self):
        values = TrainConfig(seed=9).as_dict()
        assert values["seed"] == 9
        assert set(values) >= {"lr", "batch", "patience", "grad_clip_norm"}


class TestTrainLog:
    """Epoch records and their JSONL form."""

    def _log(self):
        log = TrainLog()
        log.append(EpochRecord(1, 4.0, 0.5, 0.6, 0.1, 0.2, -0.6, best=True))
        log.append(EpochRecord(2, 3.0, 0.4, 0.5, 0.1, 0.5, 0.5, best=True))
        log.append(EpochRecord(3, 2.5, 0.45, 0.55, 0.1, 0.4, 0.1, best=False))
        return log

    def test_best_and_losses(self):
        log = self._log()
        assert len(log) == 3
        assert log.losses == [4.0, 3.0, 2.5]
        assert log.best_epoch == 2
        assert TrainLog().best is None
        assert TrainLog().best_epoch == 0

    def test_jsonl_round_trip(self, tmp_path):
        log = self._log()
        path = log.write_jsonl(tmp_path / "logs" / "train_log.jsonl")
        assert path.read_text(encoding="utf-8").count("\n") == 3
        assert TrainLog.read_jsonl(path) == log


class TestTrainStep:
    """A single optimizer update."""

    def _clips(self, seed: int, steps: int = 10):
        rng = np.random.default_rng(seed)
        x, y = rng.standard_normal((steps, 3)), rng.standard_normal(steps)
        return partition_clips(y, visual_seq(x), clip_len=5, episode_id="ep")

    def _model(self, seed: int):
        return build(ModelSpec(kind=UNIMODAL_VISUAL, visual_dim=3, embed_dim=4, hidden=4), seed)

    def test_vanishing_lr_leaves_parameters(self):
        model = self._model(0)
        before = model.clone()
        train_step(model, AdamOptimizer(lr=1e-20), self._clips(0))
        for name, param in model.params.items():
            np.testing.assert_allclose(param.value, before.params[name].value, rtol=0, atol=1e-15)

    def test_returns_mean_clip_loss(self):
        model, clips = self._model(1), self._clips(1)
        expected = clip_loss(model, clips)
        assert train_step(model, AdamOptimizer(lr=1e-3), clips) == pytest.approx(expected, abs=1e-12)

    def test_small_step_descends(self):
        failures = 0
        for seed in range(20):
            model, clips = self._model(seed), self._clips(seed)
            before = clip_loss(model, clips)
            train_step(model, AdamOptimizer(lr=1e-6), clips)
            if clip_loss(model, clips) > before:
                failures += 1
        assert failures <= 1

    def test_divergence(self, monkeypatch):
        monkeypatch.setattr(
            "training.trainer.mse_loss", lambda pred, truth: (float("nan"), np.zeros_like(pred))
        )
        with pytest.raises(TrainingDivergedError):
            train_step(self._model(2), AdamOptimizer(lr=1e-3), self._clips(2))

    def test_needs_clips(self):
        with pytest.raises(ValueError):
            train_step(self._model(3), AdamOptimizer(), [])


@pytest.fixture
def small_store(small_manifest):
    return EpisodeStore(small_manifest)


@pytest.fixture
def small_splits(small_store):
    return make_splits(small_store.categories, seed=0)


class TestTrain:
    """The epoch loop with early stopping."""

    def _config(self, **overrides):
        values = dict(lr=1e-2, batch=4, clip_len_seconds=10, hidden=4, embed_dim=4, max_epochs=3, patience=3)
        values.update(overrides)
        return TrainConfig(**values)

    def test_zero_patience_runs_one_epoch(self, small_store, small_splits):
        model = build(small_fusion_spec(), 0)
        best, log = train(model, small_splits, small_store, self._config(patience=0, max_epochs=10))
        assert len(log) == 1
        assert log.best_epoch == 1
        assert encode_checkpoint(best) == encode_checkpoint(model)

    def test_log_shape(self, small_store, small_splits):
        _, log = train(build(small_fusion_spec(), 0), small_splits, small_store, self._config())
        assert [record.epoch for record in log.records] == [1, 2, 3]
        assert log.records[0].best
        assert all(np.isfinite(record.loss) for record in log.records)

    def test_deterministic(self, small_store, small_splits):
        runs = [
            train(build(small_fusion_spec(), 5), small_splits, small_store, self._config(seed=5))
            for _ in range(2)
        ]
        (best_a, log_a), (best_b, log_b) = runs
        assert log_a.to_jsonl() == log_b.to_jsonl()
        assert encode_checkpoint(best_a) == encode_checkpoint(best_b)

    def test_empty_validation_falls_back_to_train(self, small_store):
        manifest = SplitManifest(train={"cat0": ["ep000", "ep001"]})
        _, log = train(build(small_fusion_spec(), 0), manifest, small_store, self._config(max_epochs=1))
        assert len(log) == 1

    def test_linear_task_loss_drops(self, tmp_path):
        store = EpisodeStore(write_dataset(generate_linear_task(n_episodes=8, episode_len_seconds=60, dim=4), tmp_path))
        everything = {"cat0": store.episode_ids}
        manifest = SplitManifest(train=everything, val=everything)
        model = build(ModelSpec(kind=UNIMODAL_VISUAL, visual_dim=4, embed_dim=16, hidden=16), 0)
        config = TrainConfig(
            lr=1e-2, batch=1, clip_len_seconds=10, hidden=16, embed_dim=16, max_epochs=50, patience=50
        )
        _, log = train(model, manifest, store, config)
        assert len(log) == 50
        assert log.losses[0] / min(log.losses) >= 10.0

    def test_collect_clips(self, small_store):
        model = build(small_fusion_spec(), 0)
        clips = collect_clips(model, small_store, ["ep000", "ep001"], clip_len=15)
        # 40 steps each: 15 + 15 + 10
        assert [clip.length for clip in clips] == [15, 15, 10] * 2
        assert clips[0].visual.shape == (15, 4)
        assert clips[0].audio.shape == (15, 3)


class TestEvaluate:
    """Whole-episode scoring."""

    def test_perfect_predictor(self, small_store):
        report = evaluate_predictor(
            lambda eid: PredictionSeries(small_store.target(eid), eid), small_store.episode_ids, small_store
        )
        assert report.mae == 0.0
        assert report.srcc == pytest.approx(1.0)
        assert report.n == 6 * 40

    def test_order_and_threads_do_not_matter(self, small_store):
        model = build(small_fusion_spec(), 1)
        ids = small_store.episode_ids
        assert evaluate(model, ids, small_store, threads=1) == evaluate(model, ids[::-1], small_store, threads=4)

    def test_single_episode(self, small_store):
        model = build(small_fusion_spec(), 2)
        prediction = predict_episode(model, small_store, "ep003")
        assert len(prediction) == 40
        expected = compute_report(prediction.values, small_store.target("ep003"))
        assert evaluate(model, ["ep003"], small_store) == expected

    def test_per_episode_mean(self, small_store):
        model = build(small_fusion_spec(), 3)
        ids = ["ep000", "ep004"]
        expected = average_reports(
            [compute_report(predict_episode(model, small_store, eid).values, small_store.target(eid)) for eid in ids]
        )
        assert evaluate(model, ids, small_store, pooling="per-episode-mean") == expected

    def test_ensemble_of_copies(self, small_store):
        model = build(small_fusion_spec(), 4)
        ids = small_store.episode_ids
        single = evaluate(model, ids, small_store)
        combined = evaluate_predictor(ensemble_predictor([model, model.clone()], small_store), ids, small_store)
        assert combined.mae == pytest.approx(single.mae, abs=1e-12)
        assert combined.srcc == pytest.approx(single.srcc, abs=1e-12)

    def test_no_episodes(self, small_store):
        with pytest.raises(ValueError):
            evaluate(build(small_fusion_spec(), 0), [], small_store)
