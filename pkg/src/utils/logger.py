from loguru import logger
import sys
from pathlib import Path
from typing import Optional

from core.config import Config

LOG_FILE_NAME = "viewpulse.log"

STDERR_FORMAT = (
    "<green>{time:YYYY-MM-DD HH:mm:ss}</green> | <level>{level: <8}</level> | "
    "<cyan>{name}</cyan>:<cyan>{function}</cyan>:<cyan>{line}</cyan> - <level>{message}</level>"
)
FILE_FORMAT = "{time:YYYY-MM-DD HH:mm:ss} | {level: <8} | {name}:{function}:{line} - {message}"


def _resolve_log_level() -> str:
    """Resolve effective log level from debug settings."""
    configured_level = (Config.LOG_LEVEL or "").strip().upper()
    if configured_level:
        return configured_level

    return "DEBUG" if Config.DEBUG_MODE else "INFO"


def setup_logger(
    log_level: str = "INFO",
    log_file: Optional[Path] = None,
    file_level: Optional[str] = None,
    rotation: str = "10 MB",
    retention: str = "7 days",
    compression: str = "zip",
) -> None:
    logger.remove()

    # stdout is reserved for command output
    logger.add(sys.stderr, format=STDERR_FORMAT, level=log_level.upper(), colorize=True)

    if log_file is not None:
        log_path = Path(log_file)
        if not log_path.is_absolute():
            log_path = Path.cwd() / log_path
        log_path.parent.mkdir(parents=True, exist_ok=True)

        logger.add(
            log_path,
            format=FILE_FORMAT,
            level=(file_level or log_level).upper(),
            rotation=rotation,
            retention=retention,
            compression=compression,
        )


def init_logger(log_dir: Optional[Path] = None, keep_run_log: bool = False) -> None:
    """Route logs to stderr and, for training runs or debug mode, to ``log_dir``.

    A training run keeps an INFO-level log next to its checkpoint so the
    per-epoch metrics survive the terminal session.
    """
    log_level = _resolve_log_level()
    log_file = None
    file_level = None
    if keep_run_log or Config.DEBUG_MODE:
        log_file = (log_dir or Path.cwd()) / LOG_FILE_NAME
        file_level = "DEBUG" if Config.DEBUG_MODE else "INFO"

    setup_logger(log_level=log_level, log_file=log_file, file_level=file_level)

    if Config.DEBUG_MODE:
        logger.debug("Debug mode enabled")
        logger.debug(f"Worker threads: {Config.THREADS}")
        logger.debug(f"Resolved config: {Config.resolved()}")


def get_logger():
    return logger
