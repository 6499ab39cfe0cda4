"""Command implementations; each returns the process exit status."""

import argparse
from pathlib import Path
from typing import List, Optional

import pandas as pd

from audio.mfcc import MfccConfig, extract_audio_features
from audio.wav import read_wav
from core.config import Config
from core.errors import ConfigError, MissingModalityError
from data.features import AUDIO, VISUAL
from data.fvseq import write_fvseq
from data.labels import INDICATOR_NAMES
from data.normalize import duration_normalize
from data.store import EpisodeStore
from data.synthetic import SynthConfig, generate_synthetic, write_dataset
from metrics.correlation import CorrelationTable, pooled_correlation_table
from metrics.report import write_correlation_table, write_reports
from models.checkpoint import load_checkpoint, save_checkpoint
from models.fusion import build
from models.spec import KIND_ALIASES, UNIMODAL_AUDIO, UNIMODAL_VISUAL, ModelSpec, ModelState
from texts import CliTexts
from training.config import TrainConfig
from training.evaluate import ensemble_predictor, evaluate, evaluate_predictor, predict_episode
from training.splits import make_splits
from training.trainer import train
from utils.logger import get_logger

logger = get_logger()

CHECKPOINT_NAME = "model.ckpt"
TRAIN_LOG_NAME = "train_log.jsonl"
RESOLVED_CONFIG_NAME = "config.resolved"


def cmd_gen_synth(args: argparse.Namespace) -> int:
    config = SynthConfig(
        n_categories=args.categories,
        episodes_per_category=args.episodes // args.categories,
        episode_len_seconds=args.seconds,
        visual_dim=args.visual_dim,
        audio_dim=args.audio_dim,
        seed=args.seed,
    )
    manifest = write_dataset(generate_synthetic(config), Path(args.out))
    print(CliTexts.dataset_written(manifest, config.n_episodes))
    return 0


def cmd_mfcc(args: argparse.Namespace) -> int:
    wav_path = Path(args.wav)
    clip = read_wav(wav_path)
    features = extract_audio_features(clip, MfccConfig.from_config(), args.episode_id or wav_path.stem)
    out = write_fvseq(features, Path(args.out))
    print(CliTexts.features_written(out, features.length, features.dim))
    return 0


def _model_spec(kind: str, store: EpisodeStore) -> ModelSpec:
    wanted = {UNIMODAL_VISUAL: [VISUAL], UNIMODAL_AUDIO: [AUDIO]}.get(kind, [VISUAL, AUDIO])
    missing = [modality for modality in wanted if not store.has_modality(modality)]
    if missing:
        raise MissingModalityError(CliTexts.missing_modalities(kind, missing))

    first = store.episode_ids[0]
    dims = {modality: store.features(first, modality).dim for modality in wanted}
    return ModelSpec(
        kind=kind,
        visual_dim=dims.get(VISUAL, 0),
        audio_dim=dims.get(AUDIO, 0),
        embed_dim=Config.EMBED_DIM,
        hidden=Config.HIDDEN_SIZE,
        output_bias=Config.OUTPUT_BIAS,
    )


def cmd_train(args: argparse.Namespace) -> int:
    out_dir = Path(args.out)
    store = EpisodeStore(Path(args.manifest), Config.STANDARDIZE_SCOPE)
    kind = KIND_ALIASES[args.model]
    spec = _model_spec(kind, store)
    config = TrainConfig.from_config()
    logger.info(f"Resolved training config: {config.as_dict()}")

    model = build(spec, seed=config.seed)
    splits = make_splits(store.categories, config.seed)
    best, log = train(model, splits, store, config)

    checkpoint = save_checkpoint(best, out_dir / CHECKPOINT_NAME)
    log.write_jsonl(out_dir / TRAIN_LOG_NAME)
    Config.write_resolved(out_dir / RESOLVED_CONFIG_NAME)
    best_record = log.best
    print(
        CliTexts.training_finished(
            checkpoint, log.best_epoch, len(log), best_record.composite if best_record else float("nan")
        )
    )
    return 0


def _checkpoint_paths(value: str) -> List[Path]:
    paths = [Path(part.strip()) for part in value.split(",") if part.strip()]
    if not paths:
        raise ConfigError("--checkpoints needs at least one file")
    return paths


def cmd_evaluate(args: argparse.Namespace) -> int:
    store = EpisodeStore(Path(args.manifest), Config.STANDARDIZE_SCOPE)
    paths = _checkpoint_paths(args.checkpoints)
    models: List[ModelState] = [load_checkpoint(path) for path in paths]
    episode_ids = make_splits(store.categories, Config.SEED).ids(args.split)
    if not episode_ids:
        raise ConfigError(f"Split {args.split!r} of {args.manifest} is empty")

    pooling = Config.EVAL_POOLING
    rows = [(str(path), evaluate(model, episode_ids, store, pooling)) for path, model in zip(paths, models)]
    if len(models) > 1:
        weights: Optional[List[float]] = Config.ENSEMBLE_WEIGHTS
        if weights is not None and len(weights) != len(models):
            raise ConfigError(f"{len(weights)} ensemble weights for {len(models)} checkpoints")
        rows.append(
            ("ensemble", evaluate_predictor(ensemble_predictor(models, store, weights), episode_ids, store, pooling))
        )

    out = write_reports(rows, Path(args.out))
    for name, report in rows:
        logger.info(f"{name}: srcc {report.srcc:.4f} mae {report.mae:.4f} composite {report.composite:.4f}")
    print(CliTexts.report_written(out, len(rows)))
    return 0


def cmd_correlate(args: argparse.Namespace) -> int:
    store = EpisodeStore(Path(args.manifest), Config.STANDARDIZE_SCOPE)
    groups = {}
    for episode_id in store.episode_ids:
        record = store.engagement(episode_id)
        key = record.category if args.by_category else ""
        groups.setdefault(key, []).append((duration_normalize(record), record.indicators))

    tables: List[CorrelationTable] = []
    for key in sorted(groups):
        table = pooled_correlation_table(groups[key], standardize_first=not args.raw, indicator_names=INDICATOR_NAMES)
        tables.append(table.prefixed(key) if key else table)

    out = write_correlation_table(tables, Path(args.out))
    print(CliTexts.table_written(out, sum(len(table) for table in tables)))
    return 0


def cmd_predict(args: argparse.Namespace) -> int:
    store = EpisodeStore(Path(args.manifest), Config.STANDARDIZE_SCOPE)
    store.entry(args.episode)
    model = load_checkpoint(Path(args.checkpoint))
    prediction = predict_episode(model, store, args.episode)

    frame = pd.DataFrame({"second": range(len(prediction)), "predicted": prediction.values})
    if store.has_labels(args.episode):
        frame["truth"] = store.target(args.episode)
    out = Path(args.out)
    out.parent.mkdir(parents=True, exist_ok=True)
    frame.to_csv(out, index=False)
    print(CliTexts.prediction_written(out, args.episode, len(frame)))
    return 0


COMMANDS = {
    "gen-synth": cmd_gen_synth,
    "mfcc": cmd_mfcc,
    "train": cmd_train,
    "evaluate": cmd_evaluate,
    "correlate": cmd_correlate,
    "predict": cmd_predict,
}
