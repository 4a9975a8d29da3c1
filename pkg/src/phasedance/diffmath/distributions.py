"""Gaussian KL divergence and the reparameterization trick."""

from __future__ import annotations

import numpy as np

from ..errors import DegenerateInputError, ShapeError
from . import ops
from .tensor import as_tensor


def gaussian_kl(mu_q, sigma_q, mu_p, sigma_p):
    """KL(q || p) between diagonal Gaussians, summed over all dims.

    Per dim: log(sp/sq) + (sq^2 + (mq - mp)^2) / (2 sp^2) - 1/2.
    Differentiable w.r.t. all four inputs; sigmas must be positive.
    """
    mu_q, sigma_q = as_tensor(mu_q), as_tensor(sigma_q)
    mu_p, sigma_p = as_tensor(mu_p), as_tensor(sigma_p)
    for s in (sigma_q, sigma_p):
        if np.any(s.data <= 0.0):
            raise DegenerateInputError("gaussian_kl requires strictly positive sigma")
    log_ratio = ops.log(ops.div(sigma_p, sigma_q))
    quad = ops.div(
        ops.add(ops.square(sigma_q), ops.square(ops.sub(mu_q, mu_p))),
        ops.scale(ops.square(sigma_p), 2.0),
    )
    per_dim = ops.shift(ops.add(log_ratio, quad), -0.5)
    return ops.tsum(per_dim)


def reparameterize(mu, sigma, noise):
    """mu + sigma * noise; gradient flows to mu and sigma only."""
    mu, sigma = as_tensor(mu), as_tensor(sigma)
    noise = np.asarray(noise, dtype=np.float64)
    try:
        shape = np.broadcast_shapes(mu.shape, sigma.shape, noise.shape)
    except ValueError:
        shape = None
    if shape != mu.shape:
        raise ShapeError(
            f"reparameterize shapes do not conform: mu {mu.shape}, "
            f"sigma {sigma.shape}, noise {noise.shape}"
        )
    return ops.add(mu, ops.mul(sigma, noise))
