import json
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import List, Optional

from metrics.report import MetricReport


@dataclass(frozen=True)
class EpochRecord:
    epoch: int
    loss: float
    mae: float
    rmse: float
    rmsle: float
    srcc: float
    composite: float
    best: bool = False

    @classmethod
    def from_report(cls, epoch: int, loss: float, report: MetricReport, best: bool) -> "EpochRecord":
        return cls(
            epoch=epoch,
            loss=loss,
            mae=report.mae,
            rmse=report.rmse,
            rmsle=report.rmsle,
            srcc=report.srcc,
            composite=report.composite,
            best=best,
        )


@dataclass
class TrainLog:
    """Per-epoch training loss and validation metrics."""

    records: List[EpochRecord] = field(default_factory=list)

    def append(self, record: EpochRecord) -> None:
        self.records.append(record)

    def __len__(self) -> int:
        return len(self.records)

    @property
    def losses(self) -> List[float]:
        return [record.loss for record in self.records]

    @property
    def best(self) -> Optional[EpochRecord]:
        marked = [record for record in self.records if record.best]
        return marked[-1] if marked else None

    @property
    def best_epoch(self) -> int:
        best = self.best
        return best.epoch if best is not None else 0

    def to_jsonl(self) -> str:
        return "".join(json.dumps(asdict(record), sort_keys=False) + "\n" for record in self.records)

    def write_jsonl(self, path: Path) -> Path:
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(self.to_jsonl(), encoding="utf-8")
        return path

    @classmethod
    def read_jsonl(cls, path: Path) -> "TrainLog":
        log = cls()
        for line in Path(path).read_text(encoding="utf-8").splitlines():
            if line.strip():
                log.append(EpochRecord(**json.loads(line)))
        return log
