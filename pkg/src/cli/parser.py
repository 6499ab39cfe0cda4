import argparse

from models.spec import KIND_ALIASES
from texts import CliTexts
from training.config import POOLING_MODES
from training.splits import SPLITS

H = CliTexts.FLAG_HELP


def positive_int(value: str) -> int:
    try:
        parsed = int(value)
    except ValueError:
        raise argparse.ArgumentTypeError(CliTexts.must_be_positive(value)) from None
    if parsed < 1:
        raise argparse.ArgumentTypeError(CliTexts.must_be_positive(value))
    return parsed


def episode_seconds(value: str) -> int:
    # a one-second episode has no variance to standardize
    try:
        parsed = int(value)
    except ValueError:
        raise argparse.ArgumentTypeError(CliTexts.must_be_at_least(value, 2)) from None
    if parsed < 2:
        raise argparse.ArgumentTypeError(CliTexts.must_be_at_least(value, 2))
    return parsed


def non_negative_int(value: str) -> int:
    try:
        parsed = int(value)
    except ValueError:
        raise argparse.ArgumentTypeError(CliTexts.must_be_non_negative(value)) from None
    if parsed < 0:
        raise argparse.ArgumentTypeError(CliTexts.must_be_non_negative(value))
    return parsed


def _add_gen_synth(commands) -> None:
    parser = commands.add_parser("gen-synth", help=CliTexts.COMMAND_HELP["gen-synth"])
    parser.add_argument("--out", required=True, help=H["out_dir"])
    parser.add_argument("--seed", type=int, default=42, help=H["seed"])
    parser.add_argument("--episodes", type=positive_int, default=20, help=H["episodes"])
    parser.add_argument("--categories", type=positive_int, default=2, help=H["categories"])
    parser.add_argument("--seconds", type=episode_seconds, default=600, help=H["seconds"])
    parser.add_argument("--visual-dim", type=positive_int, default=16, help=H["visual_dim"])
    parser.add_argument("--audio-dim", type=positive_int, default=26, help=H["audio_dim"])


def _add_mfcc(commands) -> None:
    parser = commands.add_parser("mfcc", help=CliTexts.COMMAND_HELP["mfcc"])
    parser.add_argument("--wav", required=True, help=H["wav"])
    parser.add_argument("--out", required=True, help=H["out_file"])
    parser.add_argument("--episode-id", default=None, help=H["episode_id"])


def _add_train(commands) -> None:
    parser = commands.add_parser("train", help=CliTexts.COMMAND_HELP["train"])
    parser.add_argument("--manifest", required=True, help=H["manifest"])
    parser.add_argument("--model", required=True, choices=list(KIND_ALIASES), help=H["model"])
    parser.add_argument("--out", required=True, help=H["out_dir"])
    # None means "not given": the layered config supplies the value
    parser.add_argument("--lr", type=float, default=None, help=H["lr"])
    parser.add_argument("--batch", type=positive_int, default=None, help=H["batch"])
    parser.add_argument("--hidden", type=positive_int, default=None, help=H["hidden"])
    parser.add_argument("--embed-dim", type=positive_int, default=None, help=H["embed_dim"])
    parser.add_argument("--clip-seconds", type=positive_int, default=None, help=H["clip_seconds"])
    parser.add_argument("--patience", type=non_negative_int, default=None, help=H["patience"])
    parser.add_argument("--max-epochs", type=positive_int, default=None, help=H["max_epochs"])
    parser.add_argument("--grad-clip-norm", type=float, default=None, help=H["grad_clip_norm"])
    parser.add_argument("--pooling", choices=POOLING_MODES, default=None, help=H["pooling"])
    parser.add_argument("--seed", type=int, default=None, help=H["seed"])


def _add_evaluate(commands) -> None:
    parser = commands.add_parser("evaluate", help=CliTexts.COMMAND_HELP["evaluate"])
    parser.add_argument("--manifest", required=True, help=H["manifest"])
    parser.add_argument("--checkpoints", required=True, help=H["checkpoints"])
    parser.add_argument("--out", required=True, help=H["out_file"])
    parser.add_argument("--split", choices=SPLITS + ("all",), default="test", help=H["split"])
    parser.add_argument("--pooling", choices=POOLING_MODES, default=None, help=H["pooling"])
    parser.add_argument("--weights", default=None, help=H["weights"])
    parser.add_argument("--seed", type=int, default=None, help=H["seed"])


def _add_correlate(commands) -> None:
    parser = commands.add_parser("correlate", help=CliTexts.COMMAND_HELP["correlate"])
    parser.add_argument("--manifest", required=True, help=H["manifest"])
    parser.add_argument("--out", required=True, help=H["out_file"])
    parser.add_argument("--raw", action="store_true", help=H["raw"])
    parser.add_argument("--by-category", action="store_true", help=H["by_category"])


def _add_predict(commands) -> None:
    parser = commands.add_parser("predict", help=CliTexts.COMMAND_HELP["predict"])
    parser.add_argument("--checkpoint", required=True, help=H["checkpoint"])
    parser.add_argument("--manifest", required=True, help=H["manifest"])
    parser.add_argument("--episode", required=True, help=H["episode"])
    parser.add_argument("--out", required=True, help=H["out_file"])


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog=CliTexts.PROG, description=CliTexts.DESCRIPTION)
    parser.add_argument("--config", default=None, help=CliTexts.CONFIG_HELP)
    parser.add_argument("--log-level", default=None, help=CliTexts.LOG_LEVEL_HELP)
    commands = parser.add_subparsers(dest="command", required=True, metavar="COMMAND")
    _add_gen_synth(commands)
    _add_mfcc(commands)
    _add_train(commands)
    _add_evaluate(commands)
    _add_correlate(commands)
    _add_predict(commands)
    return parser


# Flag name -> configuration key, for flags that override the layered config
CONFIG_OVERRIDES = {
    "lr": "train.lr",
    "batch": "train.batch",
    "hidden": "model.hidden",
    "embed_dim": "model.embed_dim",
    "clip_seconds": "train.clip_seconds",
    "patience": "train.patience",
    "max_epochs": "train.max_epochs",
    "grad_clip_norm": "train.grad_clip_norm",
    "pooling": "eval.pooling",
    "weights": "ensemble.weights",
    "seed": "train.seed",
    "log_level": "log.level",
}


def config_overrides(args: argparse.Namespace) -> dict:
    overrides = {key: getattr(args, flag, None) for flag, key in CONFIG_OVERRIDES.items()}
    # gen-synth has its own seed flag; it never feeds the training seed
    if args.command == "gen-synth":
        overrides.pop("train.seed")
    return {key: value for key, value in overrides.items() if value is not None}
