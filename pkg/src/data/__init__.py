"""Feature files, engagement labels, normalization, and the synthetic generator."""

from data.features import AUDIO, MODALITIES, VISUAL, FeatureSequence
from data.fvseq import decode_fvseq, encode_fvseq, read_fvseq, write_fvseq
from data.labels import (
    INDICATOR_DISPLAY_NAMES,
    INDICATOR_NAMES,
    LABEL_COLUMNS,
    EngagementRecord,
    read_labels,
    write_labels,
)
from data.manifest import MANIFEST_COLUMNS, ManifestEntry, read_manifest, write_manifest
from data.normalize import duration_normalize, standardize, standardize_global
from data.store import EpisodeStore
from data.synthetic import (
    SynthConfig,
    SyntheticDataset,
    generate_linear_task,
    generate_synthetic,
    write_dataset,
)

__all__ = [
    "AUDIO",
    "INDICATOR_DISPLAY_NAMES",
    "INDICATOR_NAMES",
    "LABEL_COLUMNS",
    "MANIFEST_COLUMNS",
    "MODALITIES",
    "VISUAL",
    "EngagementRecord",
    "EpisodeStore",
    "FeatureSequence",
    "ManifestEntry",
    "SynthConfig",
    "SyntheticDataset",
    "decode_fvseq",
    "duration_normalize",
    "encode_fvseq",
    "generate_linear_task",
    "generate_synthetic",
    "read_fvseq",
    "read_labels",
    "read_manifest",
    "standardize",
    "standardize_global",
    "write_dataset",
    "write_fvseq",
    "write_labels",
    "write_manifest",
]
