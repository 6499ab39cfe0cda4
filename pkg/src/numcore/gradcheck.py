from typing import Callable, Sequence

import numpy as np

from core.errors import NonFiniteError
from numcore.params import Param, zero_grads

Objective = Callable[[bool], float]


def grad_check(
    objective: Objective, params: Sequence[Param], h: float = 1e-5, floor: float = 1e-8
) -> float:
    """Compare analytic gradients with central differences.

    ``objective(compute_grad)`` must return the scalar loss and, when
    ``compute_grad`` is true, accumulate analytic gradients into ``param.grad``.
    Returns the maximum over all coordinates of
    ``|analytic - numeric| / max(|analytic|, |numeric|, floor)``; the floor keeps
    coordinates whose gradient is numerically zero from dominating.
    """
    zero_grads(params)
    base = objective(True)
    if not np.isfinite(base):
        raise NonFiniteError(f"objective returned {base}")
    analytic = [param.grad.copy() for param in params]

    worst = 0.0
    for param, expected in zip(params, analytic):
        flat = param.value.reshape(-1)
        flat_expected = expected.reshape(-1)
        for index in range(flat.size):
            original = flat[index]
            flat[index] = original + h
            plus = objective(False)
            flat[index] = original - h
            minus = objective(False)
            flat[index] = original
            if not (np.isfinite(plus) and np.isfinite(minus)):
                raise NonFiniteError(f"objective not finite around {param.name}[{index}]")
            numeric = (plus - minus) / (2.0 * h)
            denom = max(abs(flat_expected[index]), abs(numeric), floor)
            worst = max(worst, abs(flat_expected[index] - numeric) / denom)
    return worst
