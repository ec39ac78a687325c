"""Plain SGD and Adam update rules over named parameter dictionaries.

A parameter set is a ``dict[str, np.ndarray]``; gradients use the same keys
and shapes. Both rules are pure: they return fresh arrays and never mutate
their inputs.
"""

from dataclasses import dataclass, field

import numpy as np

from .exceptions import ConfigurationError, DimensionError


def _check_grads(params, grads):
    if params.keys() != grads.keys():
        raise DimensionError(
            f"gradient keys {sorted(grads)} do not match parameters {sorted(params)}"
        )
    for k, p in params.items():
        if np.shape(grads[k]) != np.shape(p):
            raise DimensionError(
                f"gradient for {k!r} has shape {np.shape(grads[k])}, parameter has {np.shape(p)}"
            )


@dataclass(frozen=True)
class SgdState:
    learning_rate: float

    def __post_init__(self):
        if not self.learning_rate >= 0:
            raise ConfigurationError(f"learning rate must be non-negative, got {self.learning_rate}")


@dataclass(frozen=True)
class AdamState:
    learning_rate: float = 1e-3
    beta1: float = 0.9
    beta2: float = 0.999
    epsilon: float = 1e-8
    t: int = 0
    m: dict = field(default_factory=dict, repr=False)
    v: dict = field(default_factory=dict, repr=False)

    def __post_init__(self):
        if not self.learning_rate >= 0:
            raise ConfigurationError(f"learning rate must be non-negative, got {self.learning_rate}")
        if not (0 < self.beta1 < 1 and 0 < self.beta2 < 1):
            raise ConfigurationError("Adam betas must lie in (0, 1)")
        if not self.epsilon > 0:
            raise ConfigurationError("Adam epsilon must be positive")


def sgd_step(params, grads, state):
    _check_grads(params, grads)
    lr = state.learning_rate
    return {k: p - lr * grads[k] for k, p in params.items()}


def adam_step(params, grads, state):
    """One bias-corrected Adam update. Returns ``(new_params, new_state)``."""
    _check_grads(params, grads)
    t = state.t + 1
    b1, b2 = state.beta1, state.beta2
    bc1 = 1.0 - b1**t
    bc2 = 1.0 - b2**t
    new_params, m_out, v_out = {}, {}, {}
    for k, p in params.items():
        g = grads[k]
        m = state.m.get(k)
        v = state.v.get(k)
        m = (1.0 - b1) * g if m is None else b1 * m + (1.0 - b1) * g
        v = (1.0 - b2) * (g * g) if v is None else b2 * v + (1.0 - b2) * (g * g)
        m_hat = m / bc1
        v_hat = v / bc2
        new_params[k] = p - state.learning_rate * m_hat / (np.sqrt(v_hat) + state.epsilon)
        m_out[k], v_out[k] = m, v
    new_state = AdamState(
        learning_rate=state.learning_rate,
        beta1=b1,
        beta2=b2,
        epsilon=state.epsilon,
        t=t,
        m=m_out,
        v=v_out,
    )
    return new_params, new_state


class Sgd:
    """Stateful wrapper around :func:`sgd_step` used by the training loops."""

    name = "sgd"

    def __init__(self, learning_rate):
        self.state = SgdState(learning_rate)

    def step(self, params, grads):
        return sgd_step(params, grads, self.state)


class Adam:
    name = "adam"

    def __init__(self, learning_rate=1e-3, beta1=0.9, beta2=0.999, epsilon=1e-8):
        self.state = AdamState(learning_rate, beta1, beta2, epsilon)

    def step(self, params, grads):
        params, self.state = adam_step(params, grads, self.state)
        return params


OPTIMIZERS = {"sgd": Sgd, "adam": Adam}


def make_optimizer(name, learning_rate):
    try:
        return OPTIMIZERS[name](learning_rate)
    except KeyError:
        raise ConfigurationError(f"unknown optimizer {name!r}") from None
