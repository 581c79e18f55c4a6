"""Adam optimizer.

The update keeps exponential moving estimates of the gradient's first and
second moments per parameter and applies w <- w - alpha * m0 / sqrt(m1 + eps),
with eps inside the square root. Bias correction of the moments is available
but off by default.
"""

from __future__ import annotations

from array import array
from dataclasses import dataclass

from . import kernels
from .errors import BadConfig, NonFiniteGradient, ShapeMismatch


@dataclass(frozen=True)
class AdamConfig:
    alpha: float = 1e-3
    beta1: float = 0.9
    beta2: float = 0.999
    epsilon: float = 1e-8
    bias_correction: bool = False

    def __post_init__(self):
        if self.alpha <= 0.0:
            raise BadConfig(f"alpha must be positive, got {self.alpha}")
        if not 0.0 < self.beta1 < 1.0:
            raise BadConfig(f"beta1 must lie in (0, 1), got {self.beta1}")
        if not 0.0 < self.beta2 < 1.0:
            raise BadConfig(f"beta2 must lie in (0, 1), got {self.beta2}")
        if self.epsilon <= 0.0:
            raise BadConfig(f"epsilon must be positive, got {self.epsilon}")


@dataclass
class AdamState:
    m0: list  # first-moment buffers, one per parameter buffer
    m1: list  # second-moment buffers, entries stay >= 0
    t: int = 0


def adam_init(sizes) -> AdamState:
    """Zeroed moment buffers for parameter buffers of the given flat sizes."""
    sizes = list(sizes)
    if not sizes:
        raise BadConfig("adam_init needs at least one parameter buffer")
    m0 = [array("d", bytes(8 * s)) for s in sizes]
    m1 = [array("d", bytes(8 * s)) for s in sizes]
    return AdamState(m0, m1, 0)


def adam_step(cfg: AdamConfig, state: AdamState, params, grads) -> None:
    """One Adam update, in place on params and state.

    params and grads are parallel lists of flat float64 buffers whose shapes
    must mirror the state's moment buffers.
    """
    if not (len(params) == len(grads) == len(state.m0) == len(state.m1)):
        raise ShapeMismatch("params, grads, and moments must align")
    for p, g, m0 in zip(params, grads, state.m0):
        if not (len(p) == len(g) == len(m0)):
            raise ShapeMismatch("gradient shape does not mirror parameter shape")
    for g in grads:
        if not kernels.all_finite(g, len(g)):
            raise NonFiniteGradient()

    state.t += 1
    if cfg.bias_correction:
        corr0 = 1.0 - cfg.beta1 ** state.t
        corr1 = 1.0 - cfg.beta2 ** state.t
    else:
        corr0 = 1.0
        corr1 = 1.0
    for p, g, m0, m1 in zip(params, grads, state.m0, state.m1):
        kernels.adam_update(
            p, g, m0, m1, len(p),
            cfg.alpha, cfg.beta1, cfg.beta2, cfg.epsilon, corr0, corr1,
        )
