"""Phase extraction / sampling / reconstruction / manifold contracts."""

import numpy as np
import pytest

from phasedance.diffmath import Tensor, grad_check, ops
from phasedance.errors import ShapeError
from phasedance.phase import (
    PhaseSample,
    extract_phase_distribution,
    manifold_from_distribution,
    mean_sample,
    phase_distance,
    phase_manifold,
    reconstruct_curves,
    sample_phase,
)


def _oracle_heads(shift_cycles, log_sigma=-1.0):
    """Heads returning a known shift angle and constant log sigmas."""
    shift_cycles = np.atleast_1d(shift_cycles)

    def shift_head(curves):
        angles = 2.0 * np.pi * shift_cycles
        return Tensor(np.column_stack([np.sin(angles), np.cos(angles)]))

    def sigma_head(curves):
        d = curves.shape[0]
        return Tensor(np.full((d, 2), log_sigma))

    return shift_head, sigma_head


def _single_bin_curves(amp=2.0, freq_bin=4, t_frames=64, shift=0.1, offset=0.5):
    t = np.arange(t_frames)
    sig = amp * np.sin(2 * np.pi * (freq_bin / t_frames * t - shift)) + offset
    return Tensor(sig[None, :])


def test_constant_channel_zero_power_convention():
    shift_head, sigma_head = _oracle_heads([0.0])
    dist = extract_phase_distribution(
        Tensor(np.full((1, 32), 0.7)), shift_head, sigma_head
    )
    assert dist.mu_amp.data[0] == 0.0
    assert dist.mu_freq.data[0] == 0.0
    assert dist.mu_off.data[0] == pytest.approx(0.7, abs=1e-12)


def test_single_bin_extraction_closed_form():
    shift_head, sigma_head = _oracle_heads([0.1])
    dist = extract_phase_distribution(
        _single_bin_curves(), shift_head, sigma_head
    )
    assert dist.mu_amp.data[0] == pytest.approx(2.0, abs=1e-9)
    assert dist.mu_freq.data[0] == pytest.approx(4.0 / 64.0, abs=1e-9)
    assert dist.mu_off.data[0] == pytest.approx(0.5, abs=1e-9)
    assert dist.mu_shift.data[0] == pytest.approx(0.1, abs=1e-12)
    dist.validate()


def test_two_bin_power_weighted_frequency():
    t = np.arange(64)
    sig = 1.0 * np.sin(2 * np.pi * 2 * t / 64) + 3.0 * np.sin(2 * np.pi * 8 * t / 64)
    shift_head, sigma_head = _oracle_heads([0.0])
    dist = extract_phase_distribution(Tensor(sig[None, :]), shift_head, sigma_head)
    assert dist.mu_amp.data[0] == pytest.approx(np.sqrt(10.0), abs=1e-9)
    assert dist.mu_freq.data[0] == pytest.approx(74.0 / 640.0, abs=1e-9)
    assert dist.mu_off.data[0] == pytest.approx(0.0, abs=1e-9)


def test_offset_recovery_any_signal():
    rng = np.random.default_rng(0)
    sig = rng.normal(size=(3, 48))
    shift_head, sigma_head = _oracle_heads([0.0, 0.0, 0.0])
    dist = extract_phase_distribution(Tensor(sig), shift_head, sigma_head)
    assert np.allclose(dist.mu_off.data, sig.mean(axis=1), atol=1e-12)


def test_frequency_bound_random_signals():
    rng = np.random.default_rng(1)
    for _ in range(100):
        sig = rng.normal(size=(4, 32))
        shift_head, sigma_head = _oracle_heads(np.zeros(4))
        dist = extract_phase_distribution(Tensor(sig), shift_head, sigma_head)
        assert np.all(dist.mu_freq.data >= 0.0)
        assert np.all(dist.mu_freq.data <= 0.5 + 1e-15)
        assert np.all(dist.mu_amp.data >= 0.0)
        dist.validate()


def test_sample_phase_mode_and_deterministic_dims():
    shift_head, sigma_head = _oracle_heads([0.1])
    dist = extract_phase_distribution(_single_bin_curves(), shift_head, sigma_head)
    z = sample_phase(dist, np.zeros((2, 1)))
    assert z.amp.data[0] == dist.mu_amp.data[0]
    assert z.shift.data[0] == dist.mu_shift.data[0]
    noisy = sample_phase(dist, np.array([[1.7], [-0.6]]))
    assert noisy.freq.data[0] == dist.mu_freq.data[0]  # bit-equal, shared
    assert noisy.off.data[0] == dist.mu_off.data[0]


def test_sample_phase_statistics():
    rng = np.random.default_rng(2)
    shift_head, sigma_head = _oracle_heads([0.05], log_sigma=np.log(0.01))
    dist = extract_phase_distribution(_single_bin_curves(), shift_head, sigma_head)
    draws = np.array([
        sample_phase(dist, rng.normal(size=(2, 1))).amp.data[0]
        for _ in range(10_000)
    ])
    assert abs(draws.std() - 0.01) / 0.01 < 0.05


def test_reconstruct_amplitude_collapse():
    z = PhaseSample(
        amp=Tensor([0.0]), freq=Tensor([0.25]), off=Tensor([1.3]), shift=Tensor([0.1])
    )
    curves = reconstruct_curves(z, 16)
    assert np.allclose(curves.data, 1.3, atol=1e-15)


def test_reconstruct_full_cycle():
    t_frames = 32
    z = PhaseSample(
        amp=Tensor([1.0]), freq=Tensor([1.0 / t_frames]),
        off=Tensor([0.0]), shift=Tensor([0.0]),
    )
    curves = reconstruct_curves(z, t_frames)
    t = np.arange(t_frames)
    assert np.allclose(curves.data[0], np.sin(2 * np.pi * t / t_frames), atol=1e-12)


def test_extract_reconstruct_roundtrip():
    shift_head, sigma_head = _oracle_heads([0.1])
    curves = _single_bin_curves()
    dist = extract_phase_distribution(curves, shift_head, sigma_head)
    rebuilt = reconstruct_curves(mean_sample(dist), 64)
    assert np.max(np.abs(rebuilt.data - curves.data)) <= 1e-8


def test_shift_integer_cycle_invariance():
    base = PhaseSample(
        amp=Tensor([1.2]), freq=Tensor([0.2]), off=Tensor([0.3]), shift=Tensor([0.17])
    )
    shifted = PhaseSample(
        amp=Tensor([1.2]), freq=Tensor([0.2]), off=Tensor([0.3]), shift=Tensor([1.17])
    )
    a = reconstruct_curves(base, 20).data
    b = reconstruct_curves(shifted, 20).data
    assert np.max(np.abs(a - b)) < 1e-9


def test_manifold_coordinates():
    z = PhaseSample(amp=Tensor([1.0]), freq=Tensor([0.1]),
                    off=Tensor([0.0]), shift=Tensor([0.25]))
    p = phase_manifold(z)
    assert p.data == pytest.approx([1.0, 0.0], abs=1e-12)
    z0 = PhaseSample(amp=Tensor([1.0]), freq=Tensor([0.1]),
                     off=Tensor([0.0]), shift=Tensor([0.0]))
    assert phase_manifold(z0).data == pytest.approx([0.0, 1.0], abs=1e-15)


def test_manifold_radius_property():
    rng = np.random.default_rng(3)
    for _ in range(50):
        d = 5
        z = PhaseSample(
            amp=Tensor(rng.uniform(0.1, 3.0, size=d)),
            freq=Tensor(rng.uniform(0.0, 0.5, size=d)),
            off=Tensor(rng.normal(size=d)),
            shift=Tensor(rng.uniform(-0.5, 0.5, size=d)),
        )
        p = phase_manifold(z).data.reshape(d, 2)
        assert np.allclose(np.linalg.norm(p, axis=1), np.abs(z.amp.data), atol=1e-9)


def test_phase_distance_values_and_oracle():
    assert phase_distance(Tensor([1.0, 2.0]), Tensor([1.0, 2.0])).item() == 0.0
    assert phase_distance(Tensor([0.0, 0.0]), Tensor([1.0, 0.0])).item() == 1.0
    rng = np.random.default_rng(4)
    a, b = rng.normal(size=8), rng.normal(size=8)
    naive = sum((float(x) - float(y)) ** 2 for x, y in zip(a, b))
    assert phase_distance(Tensor(a), Tensor(b)).item() == pytest.approx(naive, abs=1e-12)
    with pytest.raises(ShapeError):
        phase_distance(Tensor([1.0]), Tensor([1.0, 2.0]))


def test_phase_chain_gradcheck():
    """extract -> sample(noise=0) -> reconstruct -> smooth-L1 vs target."""
    rng = np.random.default_rng(5)
    d, t_frames = 3, 16
    target = rng.normal(size=(d, t_frames))
    w_shift = rng.normal(size=(t_frames, 2)) * 0.3
    w_sigma = rng.normal(size=(t_frames, 2)) * 0.3

    def fn(ts):
        curves, ws, wq = ts

        def shift_head(c):
            return ops.add(ops.matmul(c, ws), np.array([0.0, 1.0]))

        def sigma_head(c):
            return ops.matmul(c, wq)

        dist = extract_phase_distribution(curves, shift_head, sigma_head)
        z = sample_phase(dist, np.zeros((2, d)))
        rebuilt = reconstruct_curves(z, t_frames)
        return ops.smooth_l1_mean(rebuilt, Tensor(target))

    err = grad_check(fn, [rng.normal(size=(d, t_frames)), w_shift, w_sigma], eps=1e-5)
    assert err <= 1e-4


def test_manifold_gradcheck():
    rng = np.random.default_rng(6)

    def fn(ts):
        amp, shift = ts
        z = PhaseSample(amp=amp, freq=Tensor(np.full(4, 0.1)),
                        off=Tensor(np.zeros(4)), shift=shift)
        other = PhaseSample(amp=Tensor(np.ones(4)), freq=Tensor(np.full(4, 0.1)),
                            off=Tensor(np.zeros(4)), shift=Tensor(np.zeros(4)))
        return phase_distance(phase_manifold(z), phase_manifold(other))

    err = grad_check(fn, [rng.uniform(0.5, 2.0, 4), rng.uniform(-0.4, 0.4, 4)])
    assert err <= 1e-4


def test_manifold_from_distribution_is_noise_free():
    shift_head, sigma_head = _oracle_heads([0.1])
    dist = extract_phase_distribution(_single_bin_curves(), shift_head, sigma_head)
    p1 = manifold_from_distribution(dist)
    p2 = phase_manifold(mean_sample(dist))
    assert np.array_equal(p1.data, p2.data)
