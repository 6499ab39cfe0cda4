from dataclasses import dataclass
from typing import Tuple

import numpy as np

from core.errors import DimensionError
from numcore.ops import affine_backward, affine_forward, hadamard, sigmoid_map
from numcore.params import Param, glorot_init


@dataclass
class ContextGating:
    """Multiplicative gate ``sigmoid(W x + b) * x`` over one modality."""

    W: Param
    b: Param

    def __post_init__(self) -> None:
        rows, cols = self.W.shape
        if rows != cols or self.b.shape != (rows,):
            raise DimensionError("ContextGating", self.W.shape, self.b.shape)

    @property
    def dim(self) -> int:
        return self.W.shape[0]

    @classmethod
    def create(cls, prefix: str, dim: int, seed: int, stream: int) -> "ContextGating":
        return cls(
            W=Param(f"{prefix}.W", glorot_init(dim, dim, seed, stream)),
            b=Param(f"{prefix}.b", np.zeros(dim)),
        )


@dataclass
class GateCache:
    x: np.ndarray
    gate: np.ndarray


def context_gate(layer: ContextGating, x: np.ndarray) -> Tuple[np.ndarray, GateCache]:
    x = np.asarray(x, dtype=np.float64)
    if x.shape[-1:] != (layer.dim,):
        raise DimensionError("context_gate", x.shape, layer.W.shape)
    gate = sigmoid_map(affine_forward(x, layer.W.value, layer.b.value))
    return hadamard(gate, x), GateCache(x=x, gate=gate)


def context_gate_backward(
    layer: ContextGating, cache: GateCache, upstream: np.ndarray
) -> np.ndarray:
    """Return ``dL/dx`` and accumulate into ``layer.W.grad`` / ``layer.b.grad``."""
    if upstream.shape != cache.x.shape:
        raise DimensionError("context_gate_backward", cache.x.shape, upstream.shape)
    d_pre = upstream * cache.x * cache.gate * (1.0 - cache.gate)
    dx_gate, dW, db = affine_backward(cache.x, layer.W.value, d_pre)
    layer.W.grad += dW
    layer.b.grad += db
    return upstream * cache.gate + dx_gate
