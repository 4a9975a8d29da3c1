"""Metric oracles: kinetic features, GenDiv, MMC, PFC, GMC, TIF, Frechet."""

import numpy as np
import pytest
from scipy.linalg import sqrtm

from phasedance.errors import DegenerateInputError
from phasedance.metrics import (
    GaussianFit,
    frechet_distance,
    gen_div,
    gmc,
    group_features,
    kinetic_features,
    mmc,
    pfc,
    tif,
)
from phasedance.motion import (
    ConditioningFeatures,
    GroupSample,
    MotionSequence,
    assemble_pose_vector,
    pose_dim,
)


def _motion_from_parts(positions=None, velocities=None, root=None, frames=8,
                       joints=2):
    for part in (positions, velocities, root):
        if part is not None:
            frames = part.shape[0]
            break
    if positions is None:
        positions = np.zeros((frames, joints, 3))
    if velocities is None:
        velocities = np.zeros((frames, joints, 3))
    if root is None:
        root = np.zeros((frames, 3))
    rot = np.tile(np.array([1.0, 0, 0, 0, 1.0, 0]), (frames, joints, 1))
    return MotionSequence(
        poses=assemble_pose_vector(rot, positions, velocities, root),
        joint_count=joints,
    )


def _group(motions, beat_frames=()):
    frames = motions[0].frames
    cond = ConditioningFeatures(features=np.zeros((frames, 2)),
                                beat_frames=beat_frames)
    return GroupSample(group_id="t", dancers=list(motions), conditioning=cond)


def test_kinetic_static_zero():
    assert np.array_equal(kinetic_features(_motion_from_parts()), np.zeros(2))


def test_kinetic_constant_speed_closed_form():
    vel = np.zeros((6, 2, 3))
    vel[:, 1, 0] = 0.7
    feats = kinetic_features(_motion_from_parts(velocities=vel))
    assert feats[0] == 0.0
    assert feats[1] == pytest.approx(0.5 * 0.49, abs=1e-15)


def test_kinetic_matches_loop_oracle():
    rng = np.random.default_rng(0)
    vel = rng.normal(size=(7, 3, 3))
    feats = kinetic_features(_motion_from_parts(velocities=vel, joints=3))
    for j in range(3):
        expected = sum(0.5 * float(vel[t, j] @ vel[t, j]) for t in range(7)) / 7
        assert feats[j] == pytest.approx(expected, abs=1e-12)


def test_gen_div_identical_zero():
    m = _motion_from_parts(velocities=np.ones((5, 2, 3)))
    assert gen_div([m, m, m]) == 0.0


def test_gen_div_unit_apart():
    a = _motion_from_parts()
    vel = np.zeros((8, 2, 3))
    vel[:, 0, 0] = np.sqrt(2.0)  # kinetic feature (1, 0)
    b = _motion_from_parts(velocities=vel)
    assert gen_div([a, b]) == pytest.approx(1.0, abs=1e-12)


def test_gen_div_enumeration_oracle():
    rng = np.random.default_rng(1)
    motions = [
        _motion_from_parts(velocities=rng.normal(size=(6, 2, 3)))
        for _ in range(4)
    ]
    feats = [kinetic_features(m) for m in motions]
    expected = np.mean([
        np.linalg.norm(feats[i] - feats[j])
        for i in range(4) for j in range(i + 1, 4)
    ])
    assert gen_div(motions) == pytest.approx(float(expected), abs=1e-12)
    with pytest.raises(DegenerateInputError):
        gen_div(motions[:1])


def _speed_profile_motion(speed):
    """Single-joint motion whose mean joint speed equals `speed`."""
    frames = len(speed)
    vel = np.zeros((frames, 1, 3))
    vel[:, 0, 0] = speed
    return _motion_from_parts(velocities=vel, frames=frames, joints=1)


def test_mmc_perfectly_aligned():
    period = 8
    frames = 40
    t = np.arange(frames)
    dist_to_beat = np.minimum(t % period, period - (t % period))
    motion = _speed_profile_motion(dist_to_beat.astype(float))
    beats = tuple(range(period, frames - 1, period))
    assert mmc(motion, beats) == pytest.approx(1.0, abs=1e-12)


def test_mmc_distant_beats_tail():
    speed = np.linspace(2.0, 0.0, 64) ** 2
    speed[1] = 0.0  # single kinematic beat at frame 1
    motion = _speed_profile_motion(speed)
    score = mmc(motion, beats=(40, 50, 60), sigma=3.0)
    assert score < 1e-5


def test_mmc_half_sigma_closed_form():
    period = 10
    frames = 40
    t = np.arange(frames)
    dist_to_beat = np.minimum(t % period, period - (t % period))
    motion = _speed_profile_motion(dist_to_beat.astype(float))
    # kinematic beats at 0, 10, 20, 30; music beats at 10 and 23
    score = mmc(motion, beats=(10, 23), sigma=3.0)
    expected = 0.5 * (1.0 + np.exp(-0.5))
    assert score == pytest.approx(expected, abs=1e-12)


def test_mmc_requires_beats():
    with pytest.raises(DegenerateInputError):
        mmc(_speed_profile_motion(np.ones(8)), beats=())


def test_pfc_planted_feet_zero():
    pos = np.cumsum(np.random.default_rng(2).normal(size=(10, 2, 3)), axis=0)
    motion = _motion_from_parts(positions=pos, frames=10)  # zero velocities
    assert pfc(motion, foot_joints=(0, 1)) == 0.0


def test_pfc_uniform_glide_zero():
    frames = 10
    pos = np.zeros((frames, 2, 3))
    pos[:, :, 0] = np.arange(frames)[:, None]  # constant COM velocity
    vel = np.ones((frames, 2, 3))
    motion = _motion_from_parts(positions=pos, velocities=vel, frames=frames)
    assert pfc(motion, foot_joints=(0, 1)) == pytest.approx(0.0, abs=1e-12)


def test_pfc_three_frame_hand_case():
    pos = np.zeros((3, 2, 3))
    pos[:, 0, 0] = [0.0, 0.1, 0.4]
    pos[:, 1, 1] = [0.0, 0.2, 0.2]
    vel = np.zeros((3, 2, 3))
    vel[:, 0, 0] = [0.1, 0.2, 0.3]
    vel[:, 1, 1] = [0.2, 0.1, 0.0]
    motion = _motion_from_parts(positions=pos, velocities=vel, frames=3)

    com = pos.mean(axis=1)
    # manual one-sided/central differences, twice
    def diff(x):
        return np.stack([x[1] - x[0], 0.5 * (x[2] - x[0]), x[2] - x[1]])

    acc = diff(diff(com))
    acc_h = np.linalg.norm(acc[:, :2], axis=-1)
    s = acc_h * np.abs(vel[:, 0, 0]) * np.abs(vel[:, 1, 1])
    expected = s.mean() / acc_h.max()
    assert pfc(motion, foot_joints=(0, 1)) == pytest.approx(expected, abs=1e-9)


def test_gmc_identical_dancers():
    rng = np.random.default_rng(3)
    speed = rng.uniform(0.1, 1.0, size=32)
    m = _speed_profile_motion(speed)
    assert gmc(_group([m, m, m])) == pytest.approx(100.0, abs=1e-9)


def test_gmc_static_dancer_contributes_zero():
    rng = np.random.default_rng(4)
    a = _speed_profile_motion(rng.uniform(0.1, 1.0, size=32))
    b = _speed_profile_motion(np.zeros(32))
    assert gmc(_group([a, b])) == 0.0


def test_gmc_shifted_dancer_peaks_at_lag():
    rng = np.random.default_rng(5)
    speed = rng.uniform(0.1, 1.0, size=64)
    a = _speed_profile_motion(speed)
    b = _speed_profile_motion(np.roll(speed, 3))
    assert gmc(_group([a, b])) == pytest.approx(100.0, abs=1e-9)


def test_gmc_global_time_shift_invariance():
    rng = np.random.default_rng(6)
    s1 = rng.uniform(0.1, 1.0, size=48)
    s2 = rng.uniform(0.1, 1.0, size=48)
    g1 = gmc(_group([_speed_profile_motion(s1), _speed_profile_motion(s2)]))
    g2 = gmc(_group([_speed_profile_motion(np.roll(s1, 5)),
                     _speed_profile_motion(np.roll(s2, 5))]))
    assert g1 == pytest.approx(g2, abs=1e-9)


def test_tif_contracts():
    far = np.zeros((6, 3))
    near = far + np.array([20.0, 0.0, 0.0])
    a = _motion_from_parts(root=far, frames=6)
    b = _motion_from_parts(root=near, frames=6)
    assert tif(_group([a, b])) == 0.0
    assert tif(_group([a, a])) == 1.0
    half = far.copy()
    half[:3] += np.array([10.0, 0.0, 0.0])  # apart for half the frames
    c = _motion_from_parts(root=half, frames=6)
    assert tif(_group([a, c])) == pytest.approx(0.5)


def test_frechet_identities():
    rng = np.random.default_rng(7)
    rows = rng.normal(size=(20, 3))
    fit = GaussianFit.from_features(rows)
    assert frechet_distance(fit, fit) == pytest.approx(0.0, abs=1e-9)

    mu = np.array([1.0, -2.0, 0.5])
    a = GaussianFit(mean=np.zeros(3), cov=np.eye(3))
    b = GaussianFit(mean=mu, cov=np.eye(3))
    assert frechet_distance(a, b) == pytest.approx(float(mu @ mu), abs=1e-9)


def test_frechet_commuting_diagonals():
    a = GaussianFit(mean=np.zeros(2), cov=np.diag([1.0, 4.0]))
    b = GaussianFit(mean=np.zeros(2), cov=np.diag([9.0, 16.0]))
    assert frechet_distance(a, b) == pytest.approx(8.0, abs=1e-12)


def test_frechet_symmetry_and_scipy_oracle():
    rng = np.random.default_rng(8)
    for _ in range(5):
        x = rng.normal(size=(5, 4))
        y = rng.normal(size=(5, 4))
        a = GaussianFit(mean=rng.normal(size=4), cov=x.T @ x / 5 + 0.1 * np.eye(4))
        b = GaussianFit(mean=rng.normal(size=4), cov=y.T @ y / 5 + 0.1 * np.eye(4))
        fd_ab = frechet_distance(a, b)
        fd_ba = frechet_distance(b, a)
        assert fd_ab == pytest.approx(fd_ba, abs=1e-9)
        diff = a.mean - b.mean
        ref = float(diff @ diff + np.trace(
            a.cov + b.cov - 2.0 * np.real(sqrtm(a.cov @ b.cov))
        ))
        assert fd_ab == pytest.approx(ref, abs=1e-8)


def test_group_features_invariances():
    rng = np.random.default_rng(9)
    frames = 24
    motions = []
    for _ in range(3):
        root = np.cumsum(rng.normal(size=(frames, 3)) * 0.05, axis=0)
        vel = rng.normal(size=(frames, 2, 3))
        motions.append(_motion_from_parts(velocities=vel, root=root, frames=frames))
    g = _group(motions)
    f1 = group_features(g)
    f2 = group_features(g)
    assert np.array_equal(f1, f2)

    shifted = [
        _motion_from_parts(velocities=m.velocities(),
                           root=m.root() + np.array([5.0, -2.0, 1.0]),
                           frames=frames)
        for m in motions
    ]
    f3 = group_features(_group(shifted))
    assert np.allclose(f1, f3, atol=1e-12)


def test_group_features_loop_oracle():
    rng = np.random.default_rng(10)
    frames = 16
    motions = [
        _motion_from_parts(velocities=rng.normal(size=(frames, 2, 3)),
                           root=rng.normal(size=(frames, 3)), frames=frames)
        for _ in range(3)
    ]
    feats = group_features(_group(motions))
    roots = [m.root() for m in motions]
    dists = []
    for i in range(3):
        for j in range(i + 1, 3):
            for t in range(frames):
                dists.append(float(np.linalg.norm(roots[i][t] - roots[j][t])))
    assert feats[0] == pytest.approx(np.mean(dists), abs=1e-12)
    assert feats[1] == pytest.approx(np.std(dists), abs=1e-12)


def test_metrics_dancer_order_invariance():
    rng = np.random.default_rng(11)
    frames = 32
    motions = [
        _motion_from_parts(velocities=rng.normal(size=(frames, 2, 3)),
                           root=rng.normal(size=(frames, 3)) * 2, frames=frames)
        for _ in range(4)
    ]
    g1 = _group(motions)
    g2 = _group([motions[2], motions[0], motions[3], motions[1]])
    assert gmc(g1) == pytest.approx(gmc(g2), abs=1e-9)
    assert tif(g1) == pytest.approx(tif(g2), abs=1e-12)
    assert gen_div(motions) == pytest.approx(
        gen_div([motions[i] for i in (3, 1, 0, 2)]), abs=1e-12
    )
