from dataclasses import dataclass
from typing import Tuple

import numpy as np

from core.errors import DimensionError
from numcore.ops import affine_backward, affine_forward, tanh_map
from numcore.params import Param, glorot_init


@dataclass
class Embedding:
    """Non-linear projection ``tanh(W x + b)`` into the shared embedding space."""

    W: Param
    b: Param

    @property
    def in_dim(self) -> int:
        return self.W.shape[1]

    @property
    def out_dim(self) -> int:
        return self.W.shape[0]

    @classmethod
    def create(
        cls, prefix: str, in_dim: int, out_dim: int, seed: int, stream: int
    ) -> "Embedding":
        return cls(
            W=Param(f"{prefix}.W", glorot_init(out_dim, in_dim, seed, stream)),
            b=Param(f"{prefix}.b", np.zeros(out_dim)),
        )


@dataclass
class EmbedCache:
    x: np.ndarray
    y: np.ndarray


def embed(layer: Embedding, x: np.ndarray) -> Tuple[np.ndarray, EmbedCache]:
    x = np.asarray(x, dtype=np.float64)
    if x.shape[-1:] != (layer.in_dim,):
        raise DimensionError("embed", x.shape, layer.W.shape)
    y = tanh_map(affine_forward(x, layer.W.value, layer.b.value))
    return y, EmbedCache(x=x, y=y)


def embed_backward(layer: Embedding, cache: EmbedCache, upstream: np.ndarray) -> np.ndarray:
    if upstream.shape != cache.y.shape:
        raise DimensionError("embed_backward", cache.y.shape, upstream.shape)
    dx, dW, db = affine_backward(cache.x, layer.W.value, upstream * (1.0 - cache.y**2))
    layer.W.grad += dW
    layer.b.grad += db
    return dx
