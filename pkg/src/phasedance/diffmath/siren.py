"""Sinusoidal activation and its matching weight initialization."""

from __future__ import annotations

import numpy as np

from . import ops


def siren(x, omega):
    """sin(omega * x)."""
    if omega <= 0.0:
        raise ValueError("siren requires omega > 0")
    return ops.sin(ops.scale(x, omega))


def siren_init_first(fan_in, fan_out, rng):
    """First-layer weights: uniform in [-1/fan_in, 1/fan_in]."""
    bound = 1.0 / fan_in
    return rng.uniform(-bound, bound, size=(fan_in, fan_out))


def siren_init_hidden(fan_in, fan_out, omega, rng):
    """Deeper-layer weights: uniform in [-sqrt(6/fan_in)/omega, +...]."""
    bound = np.sqrt(6.0 / fan_in) / omega
    return rng.uniform(-bound, bound, size=(fan_in, fan_out))
