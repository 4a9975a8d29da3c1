"""Pose-vector layout and the motion/conditioning container types.

Per-frame pose vector, dimension 12J+3 (291 for the 24-joint rig):
    [ 6J joint rotations | 3J joint positions | 3J joint velocities |
      3 root translation ]
Positions are global (root motion included); velocities are m/frame.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ..errors import ShapeError


def pose_dim(joint_count):
    return 12 * joint_count + 3


def assemble_pose_vector(rotations6d, positions, velocities, root):
    """Concatenate per-frame components into (..., 9J+3) pose vectors."""
    rotations6d = np.asarray(rotations6d, dtype=np.float64)
    positions = np.asarray(positions, dtype=np.float64)
    velocities = np.asarray(velocities, dtype=np.float64)
    root = np.asarray(root, dtype=np.float64)
    if rotations6d.shape[-1] != 6 or positions.shape[-1] != 3 \
            or velocities.shape[-1] != 3 or root.shape[-1] != 3:
        raise ShapeError("pose components have wrong trailing dims")
    j = rotations6d.shape[-2]
    if positions.shape[-2] != j or velocities.shape[-2] != j:
        raise ShapeError("pose components disagree on joint count")
    lead = rotations6d.shape[:-2]
    return np.concatenate([
        rotations6d.reshape(lead + (6 * j,)),
        positions.reshape(lead + (3 * j,)),
        velocities.reshape(lead + (3 * j,)),
        root,
    ], axis=-1)


def split_pose_vector(pose, joint_count):
    """Inverse of assemble_pose_vector."""
    pose = np.asarray(pose, dtype=np.float64)
    j = joint_count
    if pose.shape[-1] != pose_dim(j):
        raise ShapeError(
            f"pose vector dim {pose.shape[-1]} != 12*{j}+3 = {pose_dim(j)}"
        )
    lead = pose.shape[:-1]
    rot = pose[..., : 6 * j].reshape(lead + (j, 6))
    pos = pose[..., 6 * j: 9 * j].reshape(lead + (j, 3))
    vel = pose[..., 9 * j: 12 * j].reshape(lead + (j, 3))
    root = pose[..., 12 * j:]
    return rot, pos, vel, root


@dataclass
class MotionSequence:
    """T frames of pose vectors for one dancer."""

    poses: np.ndarray        # (T, 9J+3)
    joint_count: int

    def __post_init__(self):
        self.poses = np.asarray(self.poses, dtype=np.float64)
        if self.poses.ndim != 2 or self.poses.shape[1] != pose_dim(self.joint_count):
            raise ShapeError(
                f"poses must be (T, {pose_dim(self.joint_count)}), got {self.poses.shape}"
            )

    @property
    def frames(self):
        return self.poses.shape[0]

    def rotations6d(self):
        return split_pose_vector(self.poses, self.joint_count)[0]

    def positions(self):
        return split_pose_vector(self.poses, self.joint_count)[1]

    def velocities(self):
        return split_pose_vector(self.poses, self.joint_count)[2]

    def root(self):
        return split_pose_vector(self.poses, self.joint_count)[3]


@dataclass
class ConditioningFeatures:
    """Per-frame conditioning matrix plus beat annotations."""

    features: np.ndarray          # (T, d_a)
    beat_frames: tuple = field(default=())

    def __post_init__(self):
        self.features = np.asarray(self.features, dtype=np.float64)
        if self.features.ndim != 2:
            raise ShapeError("conditioning features must be (T, d_a)")
        if not np.all(np.isfinite(self.features)):
            raise ShapeError("conditioning features must be finite")
        beats = tuple(int(b) for b in self.beat_frames)
        if any(b2 <= b1 for b1, b2 in zip(beats, beats[1:])) or \
                any(not 0 <= b < self.frames for b in beats):
            raise ShapeError("beat frames must be strictly increasing and < T")
        self.beat_frames = beats

    @property
    def frames(self):
        return self.features.shape[0]

    @property
    def dim(self):
        return self.features.shape[1]


@dataclass
class GroupSample:
    """N dancers sharing one conditioning track."""

    group_id: str
    dancers: list            # list[MotionSequence]
    conditioning: ConditioningFeatures

    def __post_init__(self):
        if len(self.dancers) < 1:
            raise ShapeError("a group needs at least one dancer")
        t = self.conditioning.frames
        if any(d.frames != t for d in self.dancers):
            raise ShapeError("all dancers must share the conditioning frame count")

    @property
    def dancer_count(self):
        return len(self.dancers)

    @property
    def frames(self):
        return self.conditioning.frames
