"""Synthetic group-choreography dataset.

Each group draws a tempo and style; its conditioning track is a beat
pulse train plus a tempo scalar and a style one-hot. All dancers in a
group perform the same base choreography (sums of sinusoids at integer
multiples of the beat frequency), differing only by a spatial root
offset and a small amplitude scale, so intra-group motion is temporally
aligned by construction.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..errors import ConfigError
from .kinematics import compute_velocities, forward_kinematics
from .rotation import axis_angle_to_matrix, matrix_to_rot6d
from .sequence import ConditioningFeatures, GroupSample, MotionSequence, assemble_pose_vector
from .skeleton import skeleton_by_name


@dataclass
class SynthConfig:
    groups: int = 4
    dancers: int = 3
    frames: int = 64
    tempo_range: tuple = (60.0, 120.0)   # beats per minute at nominal 30 fps
    styles: int = 3
    skeleton: str = "smpl24"
    fps: float = 30.0
    spacing: float = 1.5                 # meters between dancer slots

    def __post_init__(self):
        if self.groups < 1:
            raise ConfigError("synth config needs at least one group")
        if self.dancers < 1:
            raise ConfigError("synth config needs at least one dancer per group")
        if self.frames < 8:
            raise ConfigError("synth config needs at least 8 frames")
        lo, hi = self.tempo_range
        if not 0 < lo <= hi:
            raise ConfigError("tempo range must be positive and ordered")
        if self.styles < 1:
            raise ConfigError("synth config needs at least one style")

    @property
    def conditioning_dim(self):
        return 2 + self.styles


def synth_conditioning(frames, beat_period, style, styles):
    """Beat pulse train + beat frequency + style one-hot, (T, 2+styles)."""
    features = np.zeros((frames, 2 + styles))
    beats = tuple(range(0, frames, beat_period))
    features[list(beats), 0] = 1.0
    features[:, 1] = 1.0 / beat_period
    features[:, 2 + style] = 1.0
    return ConditioningFeatures(features=features, beat_frames=beats)


def _dancer_offset(index, count, spacing):
    cols = int(np.ceil(np.sqrt(count)))
    row, col = divmod(index, cols)
    rows = int(np.ceil(count / cols))
    x = (col - (cols - 1) / 2.0) * spacing
    y = (row - (rows - 1) / 2.0) * spacing
    return np.array([x, y, 0.0])


def _base_choreography(rng, joints, frames, beat_freq):
    """Per-joint rotation axis and sinusoidal angle curve (sum of 2-4
    harmonics of the beat frequency)."""
    t = np.arange(frames)
    axes = rng.normal(size=(joints, 3))
    axes /= np.linalg.norm(axes, axis=1, keepdims=True)
    max_harmonic = max(1, min(4, int(0.45 / beat_freq)))
    angles = np.zeros((joints, frames))
    for j in range(joints):
        n_terms = rng.integers(2, 5)
        harmonics = rng.choice(np.arange(1, max_harmonic + 1), size=n_terms, replace=True)
        for m in harmonics:
            amp = rng.uniform(0.05, 0.25)
            phase = rng.uniform(0.0, 2.0 * np.pi)
            angles[j] += amp * np.sin(2.0 * np.pi * m * beat_freq * t + phase)
    return axes, angles


def synth_group_dataset(config, seed):
    """Deterministic list of GroupSamples for a seed."""
    skeleton = skeleton_by_name(config.skeleton)
    joints = skeleton.joint_count
    t = np.arange(config.frames)
    groups = []
    for gi, seq in enumerate(np.random.SeedSequence(seed).spawn(config.groups)):
        rng = np.random.default_rng(seq)
        style = int(rng.integers(config.styles))
        bpm = rng.uniform(*config.tempo_range)
        period = max(4, int(round(config.fps * 60.0 / bpm)))
        beat_freq = 1.0 / period
        cond = synth_conditioning(config.frames, period, style, config.styles)

        axes, angles = _base_choreography(rng, joints, config.frames, beat_freq)
        sway_amp = rng.uniform(0.05, 0.15, size=2)
        sway_phase = rng.uniform(0.0, 2.0 * np.pi, size=2)
        height = skeleton.offsets[0, 2]

        dancers = []
        for di in range(config.dancers):
            jitter = rng.uniform(0.9, 1.1)
            rot = axis_angle_to_matrix(
                np.broadcast_to(axes, (config.frames, joints, 3)),
                (jitter * angles).T,
            )
            sway = jitter * sway_amp * np.sin(
                2.0 * np.pi * beat_freq * t[:, None] + sway_phase
            )
            root = np.column_stack([sway, np.full(config.frames, height)])
            root += _dancer_offset(di, config.dancers, config.spacing)
            positions = forward_kinematics(skeleton, rot, root)
            velocities = compute_velocities(positions)
            poses = assemble_pose_vector(matrix_to_rot6d(rot), positions, velocities, root)
            dancers.append(MotionSequence(poses=poses, joint_count=joints))
        groups.append(GroupSample(group_id=f"g{gi:03d}", dancers=dancers, conditioning=cond))
    return groups
