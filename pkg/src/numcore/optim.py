from dataclasses import dataclass
from typing import Dict, Iterable, Sequence

import numpy as np

from core.config import Config
from numcore.ops import ensure_finite
from numcore.params import Param
from utils.logger import get_logger

logger = get_logger()


@dataclass
class AdamState:
    m: np.ndarray
    v: np.ndarray
    step: int = 0
    lr: float = Config.LEARNING_RATE
    beta1: float = Config.ADAM_BETA1
    beta2: float = Config.ADAM_BETA2
    eps: float = Config.ADAM_EPS

    @classmethod
    def for_param(
        cls,
        param: Param,
        lr: float = Config.LEARNING_RATE,
        beta1: float = Config.ADAM_BETA1,
        beta2: float = Config.ADAM_BETA2,
        eps: float = Config.ADAM_EPS,
    ) -> "AdamState":
        return cls(
            m=np.zeros_like(param.value),
            v=np.zeros_like(param.value),
            lr=lr,
            beta1=beta1,
            beta2=beta2,
            eps=eps,
        )


def adam_step(param: Param, state: AdamState) -> tuple[Param, AdamState]:
    """Bias-corrected Adam update in place; ``param.grad`` is left untouched."""
    grad = param.grad
    state.step += 1
    state.m *= state.beta1
    state.m += (1.0 - state.beta1) * grad
    state.v *= state.beta2
    state.v += (1.0 - state.beta2) * grad * grad
    m_hat = state.m / (1.0 - state.beta1**state.step)
    v_hat = state.v / (1.0 - state.beta2**state.step)
    param.value -= state.lr * m_hat / (np.sqrt(v_hat) + state.eps)
    ensure_finite(param.value, f"Param {param.name} after Adam step")
    return param, state


def global_grad_norm(params: Iterable[Param]) -> float:
    return float(np.sqrt(sum(float(np.sum(p.grad * p.grad)) for p in params)))


def clip_global_norm(params: Sequence[Param], max_norm: float) -> float:
    """Rescale all gradients so their joint L2 norm is at most ``max_norm``.

    Returns the norm before clipping. ``max_norm <= 0`` disables clipping.
    """
    norm = global_grad_norm(params)
    if max_norm > 0 and norm > max_norm:
        scale = max_norm / norm
        for param in params:
            param.grad *= scale
        logger.debug(f"Clipped gradient norm {norm:.4f} -> {max_norm}")
    return norm


class AdamOptimizer:
    """Per-parameter Adam states keyed by parameter name."""

    def __init__(
        self,
        lr: float = Config.LEARNING_RATE,
        beta1: float = Config.ADAM_BETA1,
        beta2: float = Config.ADAM_BETA2,
        eps: float = Config.ADAM_EPS,
    ):
        self.lr = lr
        self.beta1 = beta1
        self.beta2 = beta2
        self.eps = eps
        self.states: Dict[str, AdamState] = {}

    def step(self, params: Iterable[Param]) -> None:
        for param in params:
            state = self.states.get(param.name)
            if state is None:
                state = AdamState.for_param(
                    param, lr=self.lr, beta1=self.beta1, beta2=self.beta2, eps=self.eps
                )
                self.states[param.name] = state
            adam_step(param, state)

    @staticmethod
    def zero_grad(params: Iterable[Param]) -> None:
        for param in params:
            param.zero_grad()
