"""Episode manifests binding per-modality feature files and label CSVs."""

from dataclasses import dataclass
from pathlib import Path
from typing import List, Optional, Sequence

import pandas as pd

from core.errors import FormatError
from utils.logger import get_logger

logger = get_logger()

MANIFEST_COLUMNS = ("episode_id", "category", "upload_age_days", "visual", "audio", "labels")


@dataclass(frozen=True)
class ManifestEntry:
    episode_id: str
    category: str
    upload_age_days: float
    visual: Optional[Path] = None
    audio: Optional[Path] = None
    labels: Optional[Path] = None


def _resolve(base: Path, value: object) -> Optional[Path]:
    text = "" if value is None or pd.isna(value) else str(value).strip()
    if not text:
        return None
    path = Path(text)
    return path if path.is_absolute() else base / path


def _relative(base: Path, path: Optional[Path]) -> str:
    if path is None:
        return ""
    try:
        return Path(path).resolve().relative_to(base.resolve()).as_posix()
    except ValueError:
        return str(path)


def read_manifest(path: Path) -> List[ManifestEntry]:
    path = Path(path)
    if not path.exists():
        raise FileNotFoundError(f"Manifest not found: {path}")
    frame = pd.read_csv(path, dtype=str, keep_default_na=False)
    if tuple(frame.columns) != MANIFEST_COLUMNS:
        raise FormatError(
            f"{path}: expected header {','.join(MANIFEST_COLUMNS)}, got {','.join(map(str, frame.columns))}"
        )

    base = path.parent
    entries: List[ManifestEntry] = []
    seen = set()
    for row in frame.itertuples(index=False):
        if row.episode_id in seen:
            raise FormatError(f"{path}: duplicate episode id {row.episode_id!r}")
        seen.add(row.episode_id)
        try:
            age = float(row.upload_age_days)
        except ValueError as error:
            raise FormatError(f"{path}: bad upload_age_days for {row.episode_id!r}") from error
        entries.append(
            ManifestEntry(
                episode_id=row.episode_id,
                category=row.category,
                upload_age_days=age,
                visual=_resolve(base, row.visual),
                audio=_resolve(base, row.audio),
                labels=_resolve(base, row.labels),
            )
        )
    logger.debug(f"Manifest {path}: {len(entries)} episodes")
    return entries


def write_manifest(entries: Sequence[ManifestEntry], path: Path) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    base = path.parent
    frame = pd.DataFrame(
        [
            {
                "episode_id": entry.episode_id,
                "category": entry.category,
                "upload_age_days": repr(float(entry.upload_age_days)),
                "visual": _relative(base, entry.visual),
                "audio": _relative(base, entry.audio),
                "labels": _relative(base, entry.labels),
            }
            for entry in entries
        ],
        columns=list(MANIFEST_COLUMNS),
    )
    frame.to_csv(path, index=False)
    return path
