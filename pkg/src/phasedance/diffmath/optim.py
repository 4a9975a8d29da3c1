"""Adam with bias correction, backed by the fused kernel layer."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .. import kernels
from ..errors import ShapeError


@dataclass
class OptimizerState:
    """Step counter plus first/second moment accumulators."""

    step: int = 0
    m: list = field(default_factory=list)
    v: list = field(default_factory=list)

    @classmethod
    def for_params(cls, params):
        return cls(
            step=0,
            m=[np.zeros_like(p.data) for p in params],
            v=[np.zeros_like(p.data) for p in params],
        )


def adam_step(params, grads, state, lr, beta1=0.9, beta2=0.999, eps=1e-8):
    """One in-place Adam update over a parameter list.

    `grads` entries are ndarrays (typically the .grad slots); a None
    gradient is treated as zero (moments still decay).
    """
    if lr <= 0.0:
        raise ValueError("adam_step requires lr > 0")
    if len(params) != len(state.m) or len(params) != len(state.v):
        raise ShapeError("optimizer state length does not match parameter list")
    state.step += 1
    for p, g, m, v in zip(params, grads, state.m, state.v):
        if g is None:
            g = np.zeros_like(p.data)
        g = np.asarray(g, dtype=np.float64)
        if g.shape != p.data.shape or m.shape != p.data.shape:
            raise ShapeError(
                f"adam_step shape mismatch: param {p.data.shape}, grad {g.shape}"
            )
        if not p.data.flags.c_contiguous:
            p.data = np.ascontiguousarray(p.data)
        kernels.adam_update(p.data, g, m, v, state.step, lr, beta1, beta2, eps)
    return params, state


def clip_global_norm(grads, max_norm):
    """Scale the gradient list in place so its global L2 norm <= max_norm."""
    total = 0.0
    for g in grads:
        if g is not None:
            total += float(np.sum(g * g))
    norm = np.sqrt(total)
    if norm > max_norm and norm > 0.0:
        factor = max_norm / norm
        for g in grads:
            if g is not None:
                g *= factor
    return norm
