"""Attention blocks and the encoder/prior/decoder forward contracts."""

import numpy as np
import pytest

from phasedance.diffmath import Tensor, allocation_stats
from phasedance.errors import ConfigError, ShapeError
from phasedance.motion import ConditioningFeatures, MotionSequence, pose_dim
from phasedance.networks import (
    AttentionBlock,
    ModelConfig,
    PhaseDanceModel,
    decode,
    encode,
    generate_group,
    multi_head_attention,
    predict_trajectory,
    prior,
)
from phasedance.phase import PhaseSample, mean_sample


def _toy_config(**overrides):
    base = dict(layers=1, hidden=16, heads=2, phase_channels=4,
                cond_dim=3, pose_dim=pose_dim(2), window=16)
    base.update(overrides)
    return ModelConfig(**base)


def _cond(config, seed=0):
    rng = np.random.default_rng(seed)
    return ConditioningFeatures(features=rng.normal(size=(config.window, config.cond_dim)))


def _motion(config, seed=1):
    rng = np.random.default_rng(seed)
    joints = (config.pose_dim - 3) // 12
    return MotionSequence(
        poses=rng.normal(size=(config.window, config.pose_dim)), joint_count=joints
    )


def test_uniform_attention_averages_values():
    rng = np.random.default_rng(0)
    v = rng.normal(size=(6, 8))
    out = multi_head_attention(Tensor(np.zeros((4, 8))), Tensor(np.zeros((6, 8))),
                               Tensor(v), heads=2)
    expected = np.tile(v.mean(axis=0), (4, 1))
    assert np.allclose(out.data, expected, atol=1e-12)


def test_single_key_row_passthrough():
    rng = np.random.default_rng(1)
    v = rng.normal(size=(1, 8))
    q = rng.normal(size=(5, 8))
    out = multi_head_attention(Tensor(q), Tensor(rng.normal(size=(1, 8))),
                               Tensor(v), heads=4)
    assert np.allclose(out.data, np.tile(v, (5, 1)), atol=1e-12)


def test_key_value_permutation_invariance():
    rng = np.random.default_rng(2)
    q = rng.normal(size=(3, 8))
    k = rng.normal(size=(7, 8))
    v = rng.normal(size=(7, 8))
    perm = rng.permutation(7)
    a = multi_head_attention(Tensor(q), Tensor(k), Tensor(v), heads=2)
    b = multi_head_attention(Tensor(q), Tensor(k[perm]), Tensor(v[perm]), heads=2)
    assert np.allclose(a.data, b.data, atol=1e-12)


def test_key_mask_matches_unpadded():
    """Masked padding keys leave the output bit-comparable to no padding."""
    rng = np.random.default_rng(3)
    q = rng.normal(size=(4, 8))
    k = rng.normal(size=(5, 8))
    v = rng.normal(size=(5, 8))
    pad_k = np.vstack([k, rng.normal(size=(3, 8))])
    pad_v = np.vstack([v, rng.normal(size=(3, 8))])
    mask = np.array([True] * 5 + [False] * 3)
    a = multi_head_attention(Tensor(q), Tensor(k), Tensor(v), heads=2)
    b = multi_head_attention(Tensor(q), Tensor(pad_k), Tensor(pad_v), heads=2,
                             key_mask=mask)
    assert np.allclose(a.data, b.data, atol=1e-12)


def test_attention_block_shape_and_determinism():
    rng = np.random.default_rng(4)
    block = AttentionBlock(hidden=16, heads=4, omega=30.0, rng=rng)
    q = Tensor(np.random.default_rng(5).normal(size=(10, 16)))
    kv = Tensor(np.random.default_rng(6).normal(size=(12, 16)))
    out1 = block(q, kv)
    out2 = block(q, kv)
    assert out1.shape == (10, 16)
    assert np.array_equal(out1.data, out2.data)


def test_encode_shape_and_determinism():
    config = _toy_config()
    model = PhaseDanceModel(config, seed=0)
    motion, cond = _motion(config), _cond(config)
    d1 = encode(model, motion, cond)
    d2 = encode(model, motion, cond)
    assert d1.channels == config.phase_channels
    for name in ("mu_amp", "mu_freq", "mu_off", "mu_shift", "sigma_amp", "sigma_shift"):
        assert np.array_equal(getattr(d1, name).data, getattr(d2, name).data)
    d1.validate()


def test_encode_frame_mismatch_rejected():
    config = _toy_config()
    model = PhaseDanceModel(config, seed=0)
    bad_cond = ConditioningFeatures(features=np.zeros((config.window + 1, config.cond_dim)))
    with pytest.raises(ShapeError):
        encode(model, _motion(config), bad_cond)


def test_prior_contract_random_trials():
    config = _toy_config()
    model = PhaseDanceModel(config, seed=1)
    for trial in range(100):
        dist = prior(model, _cond(config, seed=trial))
        dist.validate()
    assert model.prior_calls == 100


def test_decode_shape_and_degenerate_latent():
    config = _toy_config()
    model = PhaseDanceModel(config, seed=2)
    cond = _cond(config)
    d = config.phase_channels
    z = PhaseSample(amp=Tensor(np.zeros(d)), freq=Tensor(np.full(d, 0.1)),
                    off=Tensor(np.zeros(d)), shift=Tensor(np.zeros(d)))
    out = decode(model, z, cond)
    assert out.shape == (config.window, config.pose_dim)
    assert np.all(np.isfinite(out.data))
    assert np.all(out.data[:, -3:] == 0.0)  # root zeroed pending trajectory
    out2 = decode(model, z, cond)
    assert np.array_equal(out.data, out2.data)


def test_trajectory_zero_at_init():
    config = _toy_config()
    model = PhaseDanceModel(config, seed=3)
    local = Tensor(np.random.default_rng(0).normal(size=(config.window, config.pose_dim)))
    traj = predict_trajectory(model, local)
    assert traj.shape == (config.window, 3)
    assert np.all(traj.data == 0.0)


def test_generate_group_prior_called_once():
    config = _toy_config()
    model = PhaseDanceModel(config, seed=4)
    cond = _cond(config)
    for n in (2, 10, 100):
        model.prior_calls = 0
        group = generate_group(model, cond, dancers=n, seed=7)
        assert model.prior_calls == 1
        assert group.dancer_count == n
        assert all(d.frames == config.window for d in group.dancers)


def test_generate_group_single_dancer_and_determinism():
    config = _toy_config()
    model = PhaseDanceModel(config, seed=5)
    cond = _cond(config)
    g1 = generate_group(model, cond, dancers=1, seed=11)
    g2 = generate_group(model, cond, dancers=1, seed=11)
    assert np.array_equal(g1.dancers[0].poses, g2.dancers[0].poses)
    with pytest.raises(ConfigError):
        generate_group(model, cond, dancers=0, seed=0)


def test_identical_noise_draws_identical_motions():
    config = _toy_config()
    model = PhaseDanceModel(config, seed=6)
    cond = _cond(config)
    dist = prior(model, cond)
    z = mean_sample(dist)
    a = decode(model, z, cond)
    b = decode(model, z, cond)
    assert np.array_equal(a.data, b.data)


def test_generate_group_no_phase_mode():
    config = _toy_config()
    model = PhaseDanceModel(config, seed=7)
    cond = _cond(config)
    model.prior_calls = 0
    group = generate_group(model, cond, dancers=3, seed=1, mode="ablate-no-phase")
    assert model.prior_calls == 1
    # bypass mode has no per-dancer stochasticity
    assert np.array_equal(group.dancers[0].poses, group.dancers[1].poses)


def test_generate_group_constant_working_set():
    config = _toy_config()
    model = PhaseDanceModel(config, seed=8)
    cond = _cond(config)
    stats = allocation_stats()

    def peak_for(n):
        generate_group(model, cond, dancers=2, seed=0)  # warm caches
        stats.reset_peak()
        baseline = stats.live_elements
        group = generate_group(model, cond, dancers=n, seed=0)
        peak = stats.peak_elements - baseline
        outputs = sum(d.poses.size for d in group.dancers)
        return peak - outputs

    p2, p100 = peak_for(2), peak_for(100)
    assert p100 <= 1.05 * p2
