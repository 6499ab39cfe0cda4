from dataclasses import dataclass, field
from typing import Iterable, Optional

import numpy as np

from core.errors import DimensionError


def make_rng(seed: int, *stream: int) -> np.random.Generator:
    """Counter-based generator for ``seed``, optionally split into a sub-stream."""
    sequence = np.random.SeedSequence([seed, *stream]) if stream else np.random.SeedSequence(seed)
    return np.random.Generator(np.random.Philox(sequence))


@dataclass
class Param:
    """A named trainable tensor with a same-shaped gradient buffer."""

    name: str
    value: np.ndarray
    grad: np.ndarray = field(default=None)  # type: ignore[assignment]

    def __post_init__(self) -> None:
        self.value = np.asarray(self.value, dtype=np.float64)
        if self.grad is None:
            self.grad = np.zeros_like(self.value)
        else:
            self.grad = np.asarray(self.grad, dtype=np.float64)
        if self.grad.shape != self.value.shape:
            raise DimensionError(f"Param {self.name}", self.value.shape, self.grad.shape)

    @property
    def shape(self) -> tuple:
        return self.value.shape

    @property
    def size(self) -> int:
        return int(self.value.size)

    def zero_grad(self) -> None:
        self.grad.fill(0.0)

    def copy(self) -> "Param":
        return Param(self.name, self.value.copy(), self.grad.copy())


def zero_grads(params: Iterable[Param]) -> None:
    for param in params:
        param.zero_grad()


def glorot_init(rows: int, cols: int, seed: int, stream: Optional[int] = None) -> np.ndarray:
    """Uniform Glorot matrix on ``±sqrt(6 / (rows + cols))``; pure in its arguments."""
    if rows < 1 or cols < 1:
        raise DimensionError("glorot_init", (rows, cols), detail="rows and cols must be >= 1")
    limit = np.sqrt(6.0 / (rows + cols))
    rng = make_rng(seed) if stream is None else make_rng(seed, stream)
    return rng.uniform(-limit, limit, size=(rows, cols))
