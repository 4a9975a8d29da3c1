"""Finite-difference verification of reverse-mode gradients."""

from __future__ import annotations

import numpy as np

from ..errors import ShapeError
from .tensor import Tensor, no_grad


def grad_check(fn, inputs, eps=1e-5, coord_limit=None, seed=0):
    """Max relative error between reverse-mode and central differences.

    fn maps a list of Tensors to a scalar Tensor. `inputs` is a list of
    ndarrays (the evaluation point). Error per coordinate is
    |g_ad - g_fd| / max(1, |g_ad|, |g_fd|). When the total coordinate
    count exceeds `coord_limit`, a seeded uniform subset is checked.
    """
    if not 1e-7 <= eps <= 1e-3:
        raise ValueError("grad_check eps must lie in [1e-7, 1e-3]")
    points = [np.array(x, dtype=np.float64) for x in inputs]

    tensors = [Tensor(p, requires_grad=True) for p in points]
    out = fn(tensors)
    if out.size != 1:
        raise ShapeError("grad_check requires a scalar-valued function")
    out.backward()
    analytic = [
        t.grad if t.grad is not None else np.zeros_like(t.data) for t in tensors
    ]

    def evaluate(arrays):
        with no_grad():
            value = fn([Tensor(a) for a in arrays])
        if value.size != 1:
            raise ShapeError("grad_check requires a scalar-valued function")
        return value.item()

    coords = [(i, j) for i, p in enumerate(points) for j in range(p.size)]
    if coord_limit is not None and len(coords) > coord_limit:
        rng = np.random.default_rng(seed)
        picked = rng.choice(len(coords), size=coord_limit, replace=False)
        coords = [coords[k] for k in sorted(picked)]

    worst = 0.0
    for i, j in coords:
        flat = points[i].reshape(-1)
        original = flat[j]
        flat[j] = original + eps
        upper = evaluate(points)
        flat[j] = original - eps
        lower = evaluate(points)
        flat[j] = original
        g_fd = (upper - lower) / (2.0 * eps)
        g_ad = float(analytic[i].reshape(-1)[j])
        err = abs(g_ad - g_fd) / max(1.0, abs(g_ad), abs(g_fd))
        if err > worst:
            worst = err
    return worst
