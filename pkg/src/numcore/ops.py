"""Dense primitives with explicit reverse-mode rules.

Every function accepts arrays with any number of leading batch axes; the last
axis is the feature axis. A 1-D array is the single-vector case.
"""

from typing import Tuple

import numpy as np

from core.errors import DimensionError, NonFiniteError

Array = np.ndarray


def as_matrix(values, name: str = "array") -> Array:
    """Return ``values`` as a float64 array, rejecting non-finite entries."""
    array = np.asarray(values, dtype=np.float64)
    ensure_finite(array, name)
    return array


def ensure_finite(array: Array, name: str = "array") -> Array:
    if not np.all(np.isfinite(array)):
        raise NonFiniteError(f"{name} contains NaN or infinite entries")
    return array


def affine_forward(x: Array, W: Array, b: Array) -> Array:
    """Return ``W x + b`` for every vector along the last axis of ``x``."""
    x, W, b = (np.asarray(a, dtype=np.float64) for a in (x, W, b))
    if W.ndim != 2 or b.shape != (W.shape[0],) or x.shape[-1:] != W.shape[1:]:
        raise DimensionError("affine_forward", x.shape, W.shape, b.shape)
    return x @ W.T + b


def affine_backward(
    x: Array, W: Array, upstream: Array
) -> Tuple[Array, Array, Array]:
    """Gradients of ``W x + b`` given ``dL/dy``.

    Returns ``(dL/dx, dL/dW, dL/db)``; parameter gradients are summed over the
    leading batch axes.
    """
    x, W, upstream = (np.asarray(a, dtype=np.float64) for a in (x, W, upstream))
    if upstream.shape[:-1] != x.shape[:-1] or upstream.shape[-1:] != W.shape[:1]:
        raise DimensionError("affine_backward", x.shape, W.shape, upstream.shape)
    if x.shape[-1:] != W.shape[1:]:
        raise DimensionError("affine_backward", x.shape, W.shape)
    dx = upstream @ W
    flat_upstream = upstream.reshape(-1, W.shape[0])
    dW = flat_upstream.T @ x.reshape(-1, W.shape[1])
    db = flat_upstream.sum(axis=0)
    return dx, dW, db


def sigmoid_map(x: Array) -> Array:
    x = np.asarray(x, dtype=np.float64)
    # split by sign so exp never overflows
    out = np.empty_like(x)
    positive = x >= 0
    out[positive] = 1.0 / (1.0 + np.exp(-x[positive]))
    exp_x = np.exp(x[~positive])
    out[~positive] = exp_x / (1.0 + exp_x)
    return out


def tanh_map(x: Array) -> Array:
    return np.tanh(np.asarray(x, dtype=np.float64))


def hadamard(a: Array, b: Array) -> Array:
    a, b = np.asarray(a, dtype=np.float64), np.asarray(b, dtype=np.float64)
    if a.shape != b.shape:
        raise DimensionError("hadamard", a.shape, b.shape)
    return a * b


def concat(a: Array, b: Array) -> Array:
    a, b = np.asarray(a, dtype=np.float64), np.asarray(b, dtype=np.float64)
    if a.shape[:-1] != b.shape[:-1]:
        raise DimensionError("concat", a.shape, b.shape, detail="leading axes differ")
    return np.concatenate([a, b], axis=-1)


def split(v: Array, n1: int) -> Tuple[Array, Array]:
    v = np.asarray(v, dtype=np.float64)
    if not 0 <= n1 < v.shape[-1]:
        raise DimensionError(
            "split", v.shape, detail=f"index {n1} out of range [0, {v.shape[-1]})"
        )
    return v[..., :n1], v[..., n1:]
