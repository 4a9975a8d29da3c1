"""Differentiable tensor operations.

Elementwise ops broadcast with numpy semantics; gradients of broadcast
operands are summed back down to the operand shape. Reductions, shape
ops and a causal 1-D convolution round out the set needed by the
networks. Softmax, layer norm and the smooth-L1 objective route through
the fused kernel backend.
"""

from __future__ import annotations

import numpy as np

from .. import kernels
from ..errors import DegenerateInputError, ShapeError
from .tensor import Tensor, as_tensor, grad_enabled


def _unbroadcast(g, shape):
    """Sum gradient g down to `shape` (inverse of numpy broadcasting)."""
    extra = g.ndim - len(shape)
    if extra > 0:
        g = g.sum(axis=tuple(range(extra)))
    axes = tuple(i for i, s in enumerate(shape) if s == 1 and g.shape[i] != 1)
    if axes:
        g = g.sum(axis=axes, keepdims=True)
    return g


def _result(data, parents, backward):
    if grad_enabled() and any(p._needs_grad for p in parents):
        return Tensor(data, _parents=tuple(parents), _backward=backward)
    return Tensor(data)


def _binary(a, b, fwd, da, db):
    a, b = as_tensor(a), as_tensor(b)
    out = fwd(a.data, b.data)

    def backward(g):
        a.accumulate_grad(_unbroadcast(da(g, a.data, b.data), a.data.shape))
        b.accumulate_grad(_unbroadcast(db(g, a.data, b.data), b.data.shape))

    return _result(out, (a, b), backward)


def add(a, b):
    return _binary(a, b, lambda x, y: x + y,
                   lambda g, x, y: g, lambda g, x, y: g)


def sub(a, b):
    return _binary(a, b, lambda x, y: x - y,
                   lambda g, x, y: g, lambda g, x, y: -g)


def mul(a, b):
    return _binary(a, b, lambda x, y: x * y,
                   lambda g, x, y: g * y, lambda g, x, y: g * x)


def div(a, b):
    return _binary(a, b, lambda x, y: x / y,
                   lambda g, x, y: g / y, lambda g, x, y: -g * x / (y * y))


def scale(a, c):
    """Multiply by a python scalar constant."""
    a = as_tensor(a)
    c = float(c)

    def backward(g):
        a.accumulate_grad(g * c)

    return _result(a.data * c, (a,), backward)


def neg(a):
    return scale(a, -1.0)


def shift(a, c):
    """Add a python scalar constant."""
    a = as_tensor(a)
    c = float(c)

    def backward(g):
        a.accumulate_grad(g)

    return _result(a.data + c, (a,), backward)


def matmul(a, b):
    a, b = as_tensor(a), as_tensor(b)
    if a.ndim < 2 or b.ndim < 2:
        raise ShapeError("matmul requires operands with ndim >= 2")
    if a.shape[-1] != b.shape[-2]:
        raise ShapeError(f"matmul inner dims differ: {a.shape} @ {b.shape}")
    out = a.data @ b.data

    def backward(g):
        a.accumulate_grad(_unbroadcast(g @ np.swapaxes(b.data, -1, -2), a.data.shape))
        b.accumulate_grad(_unbroadcast(np.swapaxes(a.data, -1, -2) @ g, b.data.shape))

    return _result(out, (a, b), backward)


def _unary(a, fwd, dfunc):
    a = as_tensor(a)
    out = fwd(a.data)

    def backward(g):
        a.accumulate_grad(g * dfunc(a.data, out))

    return _result(out, (a,), backward)


def sin(a):
    return _unary(a, np.sin, lambda x, y: np.cos(x))


def cos(a):
    return _unary(a, np.cos, lambda x, y: -np.sin(x))


def exp(a):
    return _unary(a, np.exp, lambda x, y: y)


def log(a):
    a = as_tensor(a)
    if np.any(a.data <= 0.0):
        raise DegenerateInputError("log of non-positive input")
    return _unary(a, np.log, lambda x, y: 1.0 / x)


def sqrt(a):
    a = as_tensor(a)
    if np.any(a.data < 0.0):
        raise DegenerateInputError("sqrt of negative input")
    return _unary(a, np.sqrt, lambda x, y: 0.5 / y)


def square(a):
    return _unary(a, np.square, lambda x, y: 2.0 * x)


def pow_const(a, p):
    p = float(p)
    return _unary(a, lambda x: x ** p, lambda x, y: p * x ** (p - 1.0))


def atan2(y, x):
    """Elementwise atan2(y, x) in radians."""
    y, x = as_tensor(y), as_tensor(x)
    denom = x.data * x.data + y.data * y.data
    if np.any(denom == 0.0):
        raise DegenerateInputError("atan2 of an all-zero (y, x) pair")
    out = np.arctan2(y.data, x.data)

    def backward(g):
        y.accumulate_grad(_unbroadcast(g * x.data / denom, y.data.shape))
        x.accumulate_grad(_unbroadcast(-g * y.data / denom, x.data.shape))

    return _result(out, (y, x), backward)


def clamp(a, lo, hi):
    """Clip values; gradient passes only where unclipped."""
    a = as_tensor(a)
    out = np.clip(a.data, lo, hi)
    inside = ((a.data > lo) & (a.data < hi)).astype(np.float64)

    def backward(g):
        a.accumulate_grad(g * inside)

    return _result(out, (a,), backward)


def softmax_lastdim(a):
    a = as_tensor(a)
    y = kernels.softmax_lastdim(a.data)

    def backward(g):
        a.accumulate_grad(kernels.softmax_lastdim_grad(y, g))

    return _result(y, (a,), backward)


def layernorm_lastdim(a, eps=1e-5):
    """Normalize the last dim to zero mean / unit variance (no affine)."""
    a = as_tensor(a)
    y, rstd = kernels.layernorm_lastdim(a.data, eps)

    def backward(g):
        a.accumulate_grad(kernels.layernorm_lastdim_grad(y, rstd, g))

    return _result(y, (a,), backward)


def smooth_l1_mean(pred, target):
    """Mean smooth-L1 (beta=1) between two same-shape tensors."""
    pred, target = as_tensor(pred), as_tensor(target)
    if pred.shape != target.shape:
        raise ShapeError(f"smooth_l1 shapes differ: {pred.shape} vs {target.shape}")
    diff = pred.data - target.data
    out = kernels.smooth_l1_mean(diff)

    def backward(g):
        gd = kernels.smooth_l1_mean_grad(diff, float(g.reshape(())))
        pred.accumulate_grad(gd)
        target.accumulate_grad(-gd)

    return _result(out, (pred, target), backward)


def tsum(a, axis=None, keepdims=False):
    a = as_tensor(a)
    out = a.data.sum(axis=axis, keepdims=keepdims)

    def backward(g):
        if axis is None:
            expanded = np.broadcast_to(g.reshape((1,) * a.ndim), a.data.shape)
        elif keepdims:
            expanded = np.broadcast_to(g, a.data.shape)
        else:
            expanded = np.broadcast_to(np.expand_dims(g, axis), a.data.shape)
        a.accumulate_grad(expanded)

    return _result(out, (a,), backward)


def tmean(a, axis=None, keepdims=False):
    a = as_tensor(a)
    if axis is None:
        count = a.size
    else:
        count = a.shape[axis]
    return scale(tsum(a, axis=axis, keepdims=keepdims), 1.0 / count)


def reshape(a, shape):
    a = as_tensor(a)
    out = a.data.reshape(shape)

    def backward(g):
        a.accumulate_grad(g.reshape(a.data.shape))

    return _result(out, (a,), backward)


def transpose(a, axes=None):
    a = as_tensor(a)
    if axes is None:
        axes = tuple(reversed(range(a.ndim)))
    inverse = np.argsort(axes)

    def backward(g):
        a.accumulate_grad(g.transpose(inverse))

    return _result(a.data.transpose(axes), (a,), backward)


def concat(parts, axis=0):
    parts = [as_tensor(p) for p in parts]
    out = np.concatenate([p.data for p in parts], axis=axis)
    sizes = [p.shape[axis] for p in parts]
    splits = np.cumsum(sizes)[:-1]

    def backward(g):
        for p, piece in zip(parts, np.split(g, splits, axis=axis)):
            p.accumulate_grad(piece)

    return _result(out, tuple(parts), backward)


def getitem(a, key):
    """Basic (non-fancy) indexing with gradient scatter."""
    a = as_tensor(a)
    out = a.data[key]

    def backward(g):
        full = np.zeros_like(a.data)
        full[key] = g
        a.accumulate_grad(full)

    return _result(out, (a,), backward)


def cumsum(a, axis=0):
    a = as_tensor(a)
    out = np.cumsum(a.data, axis=axis)

    def backward(g):
        flipped = np.flip(np.cumsum(np.flip(g, axis=axis), axis=axis), axis=axis)
        a.accumulate_grad(flipped)

    return _result(out, (a,), backward)


def conv1d_causal(x, w, b):
    """Causal 1-D convolution over time.

    x: (T, C_in); w: (K, C_in, C_out); b: (C_out,).
    out[t] = b + sum_k x[t - k] @ w[k], with x[t'] = 0 for t' < 0.
    """
    x, w, b = as_tensor(x), as_tensor(w), as_tensor(b)
    if x.ndim != 2 or w.ndim != 3 or b.ndim != 1:
        raise ShapeError("conv1d_causal expects x:(T,Cin) w:(K,Cin,Cout) b:(Cout,)")
    if x.shape[1] != w.shape[1] or w.shape[2] != b.shape[0]:
        raise ShapeError(
            f"conv1d_causal channel mismatch: x{x.shape} w{w.shape} b{b.shape}"
        )
    T = x.shape[0]
    K = w.shape[0]
    out = np.tile(b.data, (T, 1))
    for k in range(K):
        if k >= T:
            break
        out[k:] += x.data[: T - k] @ w.data[k]

    def backward(g):
        gx = np.zeros_like(x.data)
        gw = np.zeros_like(w.data)
        for k in range(min(K, T)):
            gx[: T - k] += g[k:] @ w.data[k].T
            gw[k] = x.data[: T - k].T @ g[k:]
        x.accumulate_grad(gx)
        w.accumulate_grad(gw)
        b.accumulate_grad(g.sum(axis=0))

    return _result(out, (x, w, b), backward)


# Operator sugar on Tensor.
Tensor.__add__ = lambda self, other: add(self, other)
Tensor.__radd__ = lambda self, other: add(other, self)
Tensor.__sub__ = lambda self, other: sub(self, other)
Tensor.__rsub__ = lambda self, other: sub(other, self)
Tensor.__mul__ = lambda self, other: mul(self, other)
Tensor.__rmul__ = lambda self, other: mul(other, self)
Tensor.__truediv__ = lambda self, other: div(self, other)
Tensor.__matmul__ = lambda self, other: matmul(self, other)
Tensor.__neg__ = lambda self: neg(self)
