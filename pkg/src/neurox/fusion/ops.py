"""Numeric primitives with matching backward passes.

Everything is float64; backward formulas are the standard closed forms
and are verified end to end against central finite differences.
"""

from __future__ import annotations

import numpy as np
from scipy.special import erf

SQRT_2 = np.sqrt(2.0)
SQRT_2PI = np.sqrt(2.0 * np.pi)


def softmax(x: np.ndarray, axis: int = -1) -> np.ndarray:
    shifted = x - x.max(axis=axis, keepdims=True)
    e = np.exp(shifted)
    return e / e.sum(axis=axis, keepdims=True)


def softmax_backward(probs: np.ndarray, grad: np.ndarray, axis: int = -1) -> np.ndarray:
    inner = (grad * probs).sum(axis=axis, keepdims=True)
    return probs * (grad - inner)


def gelu(x: np.ndarray) -> np.ndarray:
    # exact (erf) form
    return 0.5 * x * (1.0 + erf(x / SQRT_2))


def gelu_grad(x: np.ndarray) -> np.ndarray:
    phi = np.exp(-0.5 * x * x) / SQRT_2PI
    cdf = 0.5 * (1.0 + erf(x / SQRT_2))
    return cdf + x * phi


def sigmoid(x):
    arr = np.atleast_1d(np.asarray(x, dtype=np.float64))
    out = np.empty_like(arr)
    pos = arr >= 0
    out[pos] = 1.0 / (1.0 + np.exp(-arr[pos]))
    ex = np.exp(arr[~pos])
    out[~pos] = ex / (1.0 + ex)
    return float(out[0]) if np.ndim(x) == 0 else out


def layer_norm(x: np.ndarray, gamma: np.ndarray, beta: np.ndarray, eps: float):
    """Row-wise layer normalization; returns (output, cache for backward)."""
    mean = x.mean(axis=-1, keepdims=True)
    var = x.var(axis=-1, keepdims=True)
    inv_std = 1.0 / np.sqrt(var + eps)
    x_hat = (x - mean) * inv_std
    return gamma * x_hat + beta, (x_hat, inv_std)


def layer_norm_backward(grad, cache, gamma):
    """Returns (dx, dgamma, dbeta) for row-wise layer norm."""
    x_hat, inv_std = cache
    n = x_hat.shape[-1]
    dgamma = (grad * x_hat).sum(axis=tuple(range(grad.ndim - 1)))
    dbeta = grad.sum(axis=tuple(range(grad.ndim - 1)))
    dx_hat = grad * gamma
    dx = (
        dx_hat
        - dx_hat.mean(axis=-1, keepdims=True)
        - x_hat * (dx_hat * x_hat).mean(axis=-1, keepdims=True)
    ) * inv_std
    return dx, dgamma, dbeta
