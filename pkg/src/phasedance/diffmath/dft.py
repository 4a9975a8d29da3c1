"""Differentiable real DFT via fixed coefficient matrices.

At window lengths used here (T <= 256) the O(T^2) matrix product is
cheap, and because the transform is just a matmul against constants the
reverse-mode gradients are exact by construction.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from ..errors import ShapeError
from .ops import matmul
from .tensor import Tensor, as_tensor


@dataclass
class ComplexCoefficients:
    """One-sided DFT coefficients c[i, j] for j = 0..K, K = floor(T/2)."""

    real: Tensor  # (D, K+1)
    imag: Tensor  # (D, K+1)
    window: int   # source window length T

    @property
    def channels(self):
        return self.real.shape[0]

    @property
    def bins(self):
        return self.real.shape[1]


@lru_cache(maxsize=16)
def _dft_matrices(T):
    K = T // 2
    t = np.arange(T, dtype=np.float64)[:, None]
    j = np.arange(K + 1, dtype=np.float64)[None, :]
    angle = 2.0 * np.pi * t * j / T
    return np.cos(angle), -np.sin(angle)


def dft_real(signal):
    """One-sided DFT of each row of a (D, T) tensor.

    c[i, j] = sum_t signal[i, t] * exp(-2*pi*1j * j * t / T).
    """
    signal = as_tensor(signal)
    if signal.ndim != 2:
        raise ShapeError(f"dft_real expects (D, T), got {signal.shape}")
    T = signal.shape[1]
    if T < 2:
        raise ShapeError("dft_real requires a window of at least 2 frames")
    m_re, m_im = _dft_matrices(T)
    return ComplexCoefficients(
        real=matmul(signal, Tensor(m_re)),
        imag=matmul(signal, Tensor(m_im)),
        window=T,
    )
