"""Dense float64 primitives, parameters, Adam, and gradient checking."""

from numcore.gradcheck import grad_check
from numcore.ops import (
    affine_backward,
    affine_forward,
    concat,
    ensure_finite,
    hadamard,
    sigmoid_map,
    split,
    tanh_map,
)
from numcore.optim import AdamOptimizer, AdamState, adam_step, clip_global_norm
from numcore.params import Param, glorot_init, make_rng, zero_grads

__all__ = [
    "AdamOptimizer",
    "AdamState",
    "Param",
    "adam_step",
    "affine_backward",
    "affine_forward",
    "clip_global_norm",
    "concat",
    "ensure_finite",
    "glorot_init",
    "grad_check",
    "hadamard",
    "make_rng",
    "sigmoid_map",
    "split",
    "tanh_map",
    "zero_grads",
]
