"""LSTM cell with one fused gate transform and backpropagation through time.

Gate rows of ``T`` and ``bias`` are ordered input, forget, output, candidate.
"""

from dataclasses import dataclass
from typing import List, Sequence, Tuple

import numpy as np

from core.errors import DimensionError, LengthMismatchError
from numcore.ops import (
    affine_backward,
    affine_forward,
    concat,
    sigmoid_map,
    split,
    tanh_map,
)
from numcore.params import Param, glorot_init

FORGET_BIAS_INIT = 1.0


@dataclass
class LSTMCell:
    T: Param
    bias: Param
    hidden_size: int

    def __post_init__(self) -> None:
        h = self.hidden_size
        if self.T.shape[0] != 4 * h or self.T.shape[1] <= h or self.bias.shape != (4 * h,):
            raise DimensionError("LSTMCell", self.T.shape, self.bias.shape, detail=f"hidden={h}")

    @property
    def input_size(self) -> int:
        return self.T.shape[1] - self.hidden_size

    @classmethod
    def create(
        cls, prefix: str, input_size: int, hidden_size: int, seed: int, stream: int
    ) -> "LSTMCell":
        bias = np.zeros(4 * hidden_size)
        bias[hidden_size : 2 * hidden_size] = FORGET_BIAS_INIT
        return cls(
            T=Param(
                f"{prefix}.T",
                glorot_init(4 * hidden_size, input_size + hidden_size, seed, stream),
            ),
            bias=Param(f"{prefix}.bias", bias),
            hidden_size=hidden_size,
        )


@dataclass
class LSTMStepCache:
    xh: np.ndarray
    c_prev: np.ndarray
    i: np.ndarray
    f: np.ndarray
    o: np.ndarray
    g: np.ndarray
    tanh_c: np.ndarray


def lstm_step(
    cell: LSTMCell, x_t: np.ndarray, h_prev: np.ndarray, c_prev: np.ndarray
) -> Tuple[np.ndarray, np.ndarray, LSTMStepCache]:
    h = cell.hidden_size
    x_t = np.asarray(x_t, dtype=np.float64)
    h_prev = np.asarray(h_prev, dtype=np.float64)
    c_prev = np.asarray(c_prev, dtype=np.float64)
    if x_t.shape[-1:] != (cell.input_size,):
        raise DimensionError("lstm_step", x_t.shape, cell.T.shape)
    if h_prev.shape[-1:] != (h,) or c_prev.shape != h_prev.shape:
        raise DimensionError("lstm_step", h_prev.shape, c_prev.shape, detail=f"hidden={h}")

    xh = concat(x_t, h_prev)
    z = affine_forward(xh, cell.T.value, cell.bias.value)
    i = sigmoid_map(z[..., :h])
    f = sigmoid_map(z[..., h : 2 * h])
    o = sigmoid_map(z[..., 2 * h : 3 * h])
    g = tanh_map(z[..., 3 * h :])
    c_t = f * c_prev + i * g
    tanh_c = tanh_map(c_t)
    h_t = o * tanh_c
    return h_t, c_t, LSTMStepCache(xh=xh, c_prev=c_prev, i=i, f=f, o=o, g=g, tanh_c=tanh_c)


def lstm_forward_sequence(
    cell: LSTMCell, xs: np.ndarray
) -> Tuple[np.ndarray, List[LSTMStepCache]]:
    """Run the cell over ``xs`` (time on axis 0) from zero initial states."""
    xs = np.asarray(xs, dtype=np.float64)
    state_shape = xs.shape[1:-1] + (cell.hidden_size,)
    h_t = np.zeros(state_shape)
    c_t = np.zeros(state_shape)
    hs = np.zeros(xs.shape[:-1] + (cell.hidden_size,))
    caches: List[LSTMStepCache] = []
    for t in range(xs.shape[0]):
        h_t, c_t, cache = lstm_step(cell, xs[t], h_t, c_t)
        hs[t] = h_t
        caches.append(cache)
    return hs, caches


def lstm_backward_through_time(
    cell: LSTMCell, caches: Sequence[LSTMStepCache], upstream: Sequence[np.ndarray]
) -> np.ndarray:
    """Exact reverse pass over a forward run.

    ``upstream[t]`` is ``dL/dh_t``. Returns ``dL/dx_t`` stacked on axis 0 and
    accumulates into ``cell.T.grad`` and ``cell.bias.grad``.
    """
    if len(caches) != len(upstream):
        raise LengthMismatchError(
            f"lstm_backward_through_time: {len(caches)} caches vs {len(upstream)} upstream grads"
        )
    if not caches:
        return np.zeros((0, cell.input_size))

    d_in = cell.input_size
    dxs = np.zeros((len(caches),) + caches[0].xh.shape[:-1] + (d_in,))
    dh_next = np.zeros_like(caches[0].c_prev)
    dc_next = np.zeros_like(caches[0].c_prev)
    dT = np.zeros_like(cell.T.value)
    dbias = np.zeros_like(cell.bias.value)

    for t in reversed(range(len(caches))):
        cache = caches[t]
        dh = np.asarray(upstream[t], dtype=np.float64) + dh_next
        if dh.shape != cache.c_prev.shape:
            raise DimensionError("lstm_backward_through_time", dh.shape, cache.c_prev.shape)
        dc = dc_next + dh * cache.o * (1.0 - cache.tanh_c**2)
        d_i = dc * cache.g * cache.i * (1.0 - cache.i)
        d_f = dc * cache.c_prev * cache.f * (1.0 - cache.f)
        d_o = dh * cache.tanh_c * cache.o * (1.0 - cache.o)
        d_g = dc * cache.i * (1.0 - cache.g**2)
        dz = np.concatenate([d_i, d_f, d_o, d_g], axis=-1)
        dxh, dT_t, db_t = affine_backward(cache.xh, cell.T.value, dz)
        dT += dT_t
        dbias += db_t
        dxs[t], dh_next = split(dxh, d_in)
        dc_next = dc * cache.f

    cell.T.grad += dT
    cell.bias.grad += dbias
    return dxs
