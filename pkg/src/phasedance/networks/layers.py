"""Parameterized layers: linear maps, attention blocks, extraction heads."""

from __future__ import annotations

from functools import lru_cache

import numpy as np

from ..diffmath import Tensor, ops, siren, siren_init_first, siren_init_hidden
from ..errors import ShapeError


class Linear:
    """Affine map x @ w + b with selectable initialization."""

    def __init__(self, fan_in, fan_out, rng, init="xavier", omega=None):
        if init == "xavier":
            bound = np.sqrt(6.0 / (fan_in + fan_out))
            w = rng.uniform(-bound, bound, size=(fan_in, fan_out))
        elif init == "siren-first":
            w = siren_init_first(fan_in, fan_out, rng)
        elif init == "siren-hidden":
            w = siren_init_hidden(fan_in, fan_out, omega, rng)
        elif init == "zero":
            w = np.zeros((fan_in, fan_out))
        else:
            raise ValueError(f"unknown init '{init}'")
        self.w = Tensor(w, requires_grad=True)
        self.b = Tensor(np.zeros(fan_out), requires_grad=True)

    def __call__(self, x):
        return ops.add(ops.matmul(x, self.w), self.b)

    def params(self):
        return [("w", self.w), ("b", self.b)]


@lru_cache(maxsize=32)
def sinusoidal_positions(length, dim):
    """Standard sin/cos positional encoding table, (length, dim)."""
    pos = np.arange(length, dtype=np.float64)[:, None]
    i = np.arange(dim, dtype=np.float64)[None, :]
    angle = pos / np.power(10000.0, 2.0 * np.floor(i / 2.0) / dim)
    table = np.where(i % 2 == 0, np.sin(angle), np.cos(angle))
    return table


def multi_head_attention(query, key, value, heads, key_mask=None):
    """Scaled dot-product attention, (T_q, h) x (T_k, h) -> (T_q, h).

    key_mask, when given, is a boolean (T_k,) array; False positions are
    excluded from the softmax (padding frames contribute nothing).
    """
    t_q, hidden = query.shape
    t_k = key.shape[0]
    if hidden % heads != 0:
        raise ShapeError("head count must divide the hidden size")
    if key.shape != (t_k, hidden) or value.shape != (t_k, hidden):
        raise ShapeError("attention key/value dims must match the query hidden size")
    dh = hidden // heads
    q = ops.transpose(ops.reshape(query, (t_q, heads, dh)), (1, 0, 2))
    k = ops.transpose(ops.reshape(key, (t_k, heads, dh)), (1, 0, 2))
    v = ops.transpose(ops.reshape(value, (t_k, heads, dh)), (1, 0, 2))
    scores = ops.scale(ops.matmul(q, ops.transpose(k, (0, 2, 1))), 1.0 / np.sqrt(dh))
    if key_mask is not None:
        key_mask = np.asarray(key_mask, dtype=bool)
        if key_mask.shape != (t_k,):
            raise ShapeError("key_mask must be one flag per key row")
        penalty = np.where(key_mask, 0.0, -1e30)[None, None, :]
        scores = ops.add(scores, penalty)
    weights = ops.softmax_lastdim(scores)
    context = ops.matmul(weights, v)
    return ops.reshape(ops.transpose(context, (1, 0, 2)), (t_q, hidden))


class AttentionBlock:
    """Post-norm transformer block: multi-head attention + residual +
    layer norm, then a Siren feed-forward + residual + layer norm."""

    FF_MULTIPLIER = 4

    def __init__(self, hidden, heads, omega, rng):
        self.heads = heads
        self.omega = omega
        self.wq = Linear(hidden, hidden, rng)
        self.wk = Linear(hidden, hidden, rng)
        self.wv = Linear(hidden, hidden, rng)
        self.wo = Linear(hidden, hidden, rng)
        ff = hidden * self.FF_MULTIPLIER
        self.ff1 = Linear(hidden, ff, rng, init="siren-hidden", omega=omega)
        self.ff2 = Linear(ff, hidden, rng)
        self.ln1_gain = Tensor(np.ones(hidden), requires_grad=True)
        self.ln1_bias = Tensor(np.zeros(hidden), requires_grad=True)
        self.ln2_gain = Tensor(np.ones(hidden), requires_grad=True)
        self.ln2_bias = Tensor(np.zeros(hidden), requires_grad=True)

    def __call__(self, query, keyvalue):
        attended = multi_head_attention(
            self.wq(query), self.wk(keyvalue), self.wv(keyvalue), self.heads
        )
        x = ops.add(query, self.wo(attended))
        x = ops.add(ops.mul(ops.layernorm_lastdim(x), self.ln1_gain), self.ln1_bias)
        f = self.ff2(siren(self.ff1(x), self.omega))
        y = ops.add(x, f)
        return ops.add(ops.mul(ops.layernorm_lastdim(y), self.ln2_gain), self.ln2_bias)

    def params(self):
        named = []
        for tag, lin in (("wq", self.wq), ("wk", self.wk), ("wv", self.wv),
                         ("wo", self.wo), ("ff1", self.ff1), ("ff2", self.ff2)):
            named += [(f"{tag}.{n}", t) for n, t in lin.params()]
        named += [("ln1.gain", self.ln1_gain), ("ln1.bias", self.ln1_bias),
                  ("ln2.gain", self.ln2_gain), ("ln2.bias", self.ln2_bias)]
        return named


class ShiftHead:
    """Per-channel FC map from a T-long latent curve to (s_y, s_x)."""

    def __init__(self, window, rng):
        self.lin = Linear(window, 2, rng)
        # start at angle 0 rather than the undefined atan2(0, 0)
        self.lin.b.data[:] = (0.0, 1.0)

    def __call__(self, curves):
        return self.lin(curves)

    def params(self):
        return [(f"lin.{n}", t) for n, t in self.lin.params()]


class SigmaHead:
    """Two-layer per-channel MLP to (log sigma_A, log sigma_S)."""

    HIDDEN = 16
    INITIAL_LOG_SIGMA = -2.0

    def __init__(self, window, omega, rng):
        self.omega = omega
        self.lin1 = Linear(window, self.HIDDEN, rng, init="siren-hidden", omega=omega)
        self.lin2 = Linear(self.HIDDEN, 2, rng, init="zero")
        self.lin2.b.data[:] = self.INITIAL_LOG_SIGMA

    def __call__(self, curves):
        return self.lin2(siren(self.lin1(curves), self.omega))

    def params(self):
        named = [(f"lin1.{n}", t) for n, t in self.lin1.params()]
        named += [(f"lin2.{n}", t) for n, t in self.lin2.params()]
        return named


class TrajectoryPredictor:
    """Three causal temporal convolutions from local pose features to
    per-frame root deltas; the zero-initialized output layer makes the
    predictor an identity (all-zero trajectory) at initialization."""

    KERNEL = 5
    CHANNELS = 32

    def __init__(self, pose_dim, omega, rng):
        self.omega = omega
        k, c = self.KERNEL, self.CHANNELS
        scale1 = np.sqrt(6.0 / (k * pose_dim)) / omega
        scale2 = np.sqrt(6.0 / (k * c)) / omega
        self.w1 = Tensor(rng.uniform(-scale1, scale1, size=(k, pose_dim, c)),
                         requires_grad=True)
        self.b1 = Tensor(np.zeros(c), requires_grad=True)
        self.w2 = Tensor(rng.uniform(-scale2, scale2, size=(k, c, c)),
                         requires_grad=True)
        self.b2 = Tensor(np.zeros(c), requires_grad=True)
        self.w3 = Tensor(np.zeros((k, c, 3)), requires_grad=True)
        self.b3 = Tensor(np.zeros(3), requires_grad=True)

    def __call__(self, local_motion):
        h = siren(ops.conv1d_causal(local_motion, self.w1, self.b1), self.omega)
        h = siren(ops.conv1d_causal(h, self.w2, self.b2), self.omega)
        deltas = ops.conv1d_causal(h, self.w3, self.b3)
        return ops.cumsum(deltas, axis=0)

    def params(self):
        return [("w1", self.w1), ("b1", self.b1), ("w2", self.w2),
                ("b2", self.b2), ("w3", self.w3), ("b3", self.b3)]
