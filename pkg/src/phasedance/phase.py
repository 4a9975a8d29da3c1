"""Variational phase manifold over latent curves.

Each latent channel is summarized by a sinusoid: amplitude A, frequency
F (cycles/frame), offset B and phase shift S (cycles). A and S are
stochastic (Gaussian with learned sigmas); F and B are deterministic
copies of their means, since sampling them destabilizes group coherence.
Points embed on the manifold as (A sin 2piS, A cos 2piS) per channel.

The extraction path is fully differentiable: the DFT is a fixed matrix
product and the A/F/B statistics are smooth functions of the power
spectrum except on the measure-zero set handled by the zero-power
convention (a flat channel carries no periodic content, so A = F = 0).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .diffmath import Tensor, as_tensor, dft_real, ops, reparameterize
from .errors import ShapeError

TWO_PI = 2.0 * np.pi
LOG_SIGMA_MIN = -8.0
LOG_SIGMA_MAX = 2.0


@dataclass
class PhaseDistribution:
    """Per-channel sinusoid parameters: means plus A/S spreads.

    sigma for F and B is exactly zero by construction, so those fields
    are omitted; samples copy the means for the deterministic dims.
    """

    mu_amp: Tensor
    mu_freq: Tensor
    mu_off: Tensor
    mu_shift: Tensor
    sigma_amp: Tensor
    sigma_shift: Tensor

    @property
    def channels(self):
        return self.mu_amp.shape[0]

    def validate(self):
        d = self.channels
        for name in ("mu_freq", "mu_off", "mu_shift", "sigma_amp", "sigma_shift"):
            if getattr(self, name).shape != (d,):
                raise ShapeError(f"phase distribution field {name} has wrong shape")
        if np.any(self.mu_amp.data < 0.0):
            raise ShapeError("mu_amp must be non-negative")
        if np.any(self.mu_freq.data < 0.0) or np.any(self.mu_freq.data > 0.5):
            raise ShapeError("mu_freq must lie in [0, 0.5]")
        if np.any(np.abs(self.mu_shift.data) > 0.5):
            raise ShapeError("mu_shift must lie in [-0.5, 0.5)")
        if np.any(self.sigma_amp.data <= 0.0) or np.any(self.sigma_shift.data <= 0.0):
            raise ShapeError("sigmas must be strictly positive")
        return self


@dataclass
class PhaseSample:
    """One concrete draw z = (A, F, B, S); F and B equal the means."""

    amp: Tensor
    freq: Tensor
    off: Tensor
    shift: Tensor

    @property
    def channels(self):
        return self.amp.shape[0]


def extract_phase_distribution(latent_curves, shift_head, sigma_head):
    """Frequency-domain distribution parameters of (D, T) latent curves.

    shift_head maps the curves to per-channel (s_y, s_x); sigma_head maps
    them to per-channel (log sigma_A, log sigma_S), clamped to
    [-8, 2] before exponentiation.
    """
    curves = as_tensor(latent_curves)
    if curves.ndim != 2:
        raise ShapeError(f"latent curves must be (D, T), got {curves.shape}")
    t_frames = curves.shape[1]
    coeffs = dft_real(curves)

    power = ops.scale(
        ops.add(ops.square(coeffs.real), ops.square(coeffs.imag)), 2.0 / t_frames
    )
    ac_power = ops.getitem(power, (slice(None), slice(1, None)))
    total = ops.tsum(ac_power, axis=1)

    # Zero-power convention: channels whose AC power is below eps carry
    # no periodic content; their A and F are pinned to 0 and the masked
    # denominator avoids 0/0 without breaking the gradient elsewhere.
    eps = 1e-12 * t_frames
    mask = (total.data >= eps).astype(np.float64)
    safe_total = ops.add(ops.mul(total, mask), 1.0 - mask)

    mu_amp = ops.mul(ops.sqrt(ops.scale(safe_total, 2.0 / t_frames)), mask)

    bin_freqs = np.arange(1, ac_power.shape[1] + 1, dtype=np.float64) / t_frames
    weighted = ops.tsum(ops.mul(ac_power, bin_freqs), axis=1)
    mu_freq = ops.mul(ops.div(weighted, safe_total), mask)

    mu_off = ops.scale(ops.getitem(coeffs.real, (slice(None), 0)), 1.0 / t_frames)

    sy_sx = as_tensor(shift_head(curves))
    if sy_sx.shape != (curves.shape[0], 2):
        raise ShapeError("shift head must return (D, 2) values")
    angle = ops.atan2(
        ops.getitem(sy_sx, (slice(None), 0)), ops.getitem(sy_sx, (slice(None), 1))
    )
    mu_shift = ops.scale(angle, 1.0 / TWO_PI)
    # atan2 yields (-0.5, 0.5] in cycles; fold the single boundary point.
    boundary = (mu_shift.data == 0.5).astype(np.float64)
    if boundary.any():
        mu_shift = ops.sub(mu_shift, boundary)

    log_sigma = ops.clamp(as_tensor(sigma_head(curves)), LOG_SIGMA_MIN, LOG_SIGMA_MAX)
    if log_sigma.shape != (curves.shape[0], 2):
        raise ShapeError("sigma head must return (D, 2) values")
    sigma_amp = ops.exp(ops.getitem(log_sigma, (slice(None), 0)))
    sigma_shift = ops.exp(ops.getitem(log_sigma, (slice(None), 1)))

    return PhaseDistribution(
        mu_amp=mu_amp, mu_freq=mu_freq, mu_off=mu_off, mu_shift=mu_shift,
        sigma_amp=sigma_amp, sigma_shift=sigma_shift,
    )


def sample_phase(dist, noise):
    """Reparameterized draw: A and S stochastic, F and B copied.

    noise is a (2, D) standard-normal array: row 0 perturbs amplitudes,
    row 1 perturbs shifts. Sampled A stays unclamped: a negative draw is
    an equivalent half-cycle shift, and clamping would bias gradients.
    """
    noise = np.asarray(noise, dtype=np.float64)
    if noise.shape != (2, dist.channels):
        raise ShapeError(
            f"noise must be (2, {dist.channels}), got {noise.shape}"
        )
    amp = reparameterize(dist.mu_amp, dist.sigma_amp, noise[0])
    shift = reparameterize(dist.mu_shift, dist.sigma_shift, noise[1])
    return PhaseSample(amp=amp, freq=dist.mu_freq, off=dist.mu_off, shift=shift)


def mean_sample(dist):
    """Noise-free sample: the distribution mode."""
    return sample_phase(dist, np.zeros((2, dist.channels)))


def reconstruct_curves(z, t_frames):
    """Sinusoidal curves L[i, t] = A_i sin(2pi (F_i t - S_i)) + B_i
    over t = 0..T-1."""
    if t_frames < 2:
        raise ShapeError("curve reconstruction needs at least 2 frames")
    d = z.channels
    t = np.arange(t_frames, dtype=np.float64)[None, :]
    freq_col = ops.reshape(z.freq, (d, 1))
    shift_col = ops.reshape(z.shift, (d, 1))
    phase = ops.scale(ops.sub(ops.mul(freq_col, t), shift_col), TWO_PI)
    amp_col = ops.reshape(z.amp, (d, 1))
    off_col = ops.reshape(z.off, (d, 1))
    return ops.add(ops.mul(amp_col, ops.sin(phase)), off_col)


def phase_manifold(z):
    """Embed a sample as (A_i sin 2piS_i, A_i cos 2piS_i) pairs, (2D,)."""
    angle = ops.scale(z.shift, TWO_PI)
    sin_part = ops.mul(z.amp, ops.sin(angle))
    cos_part = ops.mul(z.amp, ops.cos(angle))
    d = z.channels
    stacked = ops.concat(
        [ops.reshape(sin_part, (d, 1)), ops.reshape(cos_part, (d, 1))], axis=1
    )
    return ops.reshape(stacked, (2 * d,))


def manifold_from_distribution(dist):
    """Noise-free manifold point computed from the distribution means."""
    return phase_manifold(mean_sample(dist))


def phase_distance(point_a, point_b):
    """Squared Euclidean distance between manifold points."""
    point_a, point_b = as_tensor(point_a), as_tensor(point_b)
    if point_a.shape != point_b.shape:
        raise ShapeError("phase_distance points have different dimensions")
    return ops.tsum(ops.square(ops.sub(point_a, point_b)))
