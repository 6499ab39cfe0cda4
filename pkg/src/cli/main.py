import sys
from pathlib import Path
from typing import Optional, Sequence

from cli.commands import COMMANDS
from cli.parser import build_parser, config_overrides
from core.config import Config, init_config
from core.errors import ViewPulseError
from texts import CliTexts
from utils.logger import get_logger, init_logger

logger = get_logger()

EXIT_OK = 0
EXIT_RUNTIME = 1
EXIT_USAGE = 2


def main(argv: Optional[Sequence[str]] = None) -> int:
    """Parse, resolve configuration, and run one command.

    Exit status is 0 on success, 1 for runtime and data errors, and 2 for
    usage errors (argparse exits with 2 on its own).
    """
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command == "gen-synth" and args.episodes % args.categories:
        parser.error(CliTexts.episodes_not_divisible(args.episodes, args.categories))

    try:
        Config.reset()
        init_config(Path(args.config) if args.config else None, config_overrides(args))
    except ViewPulseError as error:
        print(CliTexts.runtime_error(str(error)), file=sys.stderr)
        return EXIT_USAGE

    out = Path(args.out)
    init_logger(
        out if args.command in ("gen-synth", "train") else out.parent,
        keep_run_log=args.command == "train",
    )

    try:
        return COMMANDS[args.command](args)
    except (ViewPulseError, OSError, ValueError) as error:
        logger.error(f"{args.command} failed: {error}")
        print(CliTexts.runtime_error(str(error)), file=sys.stderr)
        return EXIT_RUNTIME
