"""Pure-numpy implementations of the fused hot kernels.

Every function accepts/returns float64 arrays and is the reference
semantics for the compiled backend: same formulas, same clamping, same
update order.
"""

import numpy as np

NAME = "numpy"


def softmax_lastdim(x):
    shifted = x - x.max(axis=-1, keepdims=True)
    e = np.exp(shifted)
    return e / e.sum(axis=-1, keepdims=True)


def softmax_lastdim_grad(y, gy):
    inner = (y * gy).sum(axis=-1, keepdims=True)
    return y * (gy - inner)


def layernorm_lastdim(x, eps):
    mean = x.mean(axis=-1, keepdims=True)
    centered = x - mean
    var = (centered * centered).mean(axis=-1, keepdims=True)
    rstd = 1.0 / np.sqrt(var + eps)
    return centered * rstd, rstd


def layernorm_lastdim_grad(y, rstd, gy):
    mean_gy = gy.mean(axis=-1, keepdims=True)
    mean_gy_y = (gy * y).mean(axis=-1, keepdims=True)
    return rstd * (gy - mean_gy - y * mean_gy_y)


def smooth_l1_mean(diff):
    """Mean smooth-L1 with transition beta=1 over all elements of diff."""
    a = np.abs(diff)
    per_elem = np.where(a < 1.0, 0.5 * diff * diff, a - 0.5)
    return float(per_elem.mean())


def smooth_l1_mean_grad(diff, gscale):
    a = np.abs(diff)
    local = np.where(a < 1.0, diff, np.sign(diff))
    return local * (gscale / diff.size)


def adam_update(param, grad, m, v, step, lr, beta1, beta2, eps):
    """One bias-corrected Adam update, in place on param/m/v.

    `step` is the post-increment step count (1 on the first update).
    """
    m *= beta1
    m += (1.0 - beta1) * grad
    v *= beta2
    v += (1.0 - beta2) * grad * grad
    mhat = m / (1.0 - beta1 ** step)
    vhat = v / (1.0 - beta2 ** step)
    param -= lr * mhat / (np.sqrt(vhat) + eps)
