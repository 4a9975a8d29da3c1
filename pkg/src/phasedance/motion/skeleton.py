"""Skeleton topology and the built-in rigs.

World convention is Z-up; offsets are meters. The default rig follows
the 24-joint SMPL topology (published parent array); a reduced 8-joint
rig keeps tests fast.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ..errors import ConfigError


@dataclass(frozen=True)
class Skeleton:
    names: tuple
    parents: tuple          # parent index per joint, -1 for the single root
    offsets: np.ndarray     # (J, 3) rest-pose offsets from parent, meters
    foot_joints: tuple = field(default=())  # (left, right) indices for contact metrics

    def __post_init__(self):
        offsets = np.asarray(self.offsets, dtype=np.float64)
        object.__setattr__(self, "offsets", offsets)
        j = len(self.parents)
        if len(self.names) != j or offsets.shape != (j, 3):
            raise ConfigError("skeleton field lengths disagree")
        if self.parents[0] != -1 or any(p == -1 for p in self.parents[1:]):
            raise ConfigError("skeleton must have exactly one root at index 0")
        for i, p in enumerate(self.parents[1:], start=1):
            if not 0 <= p < i:
                raise ConfigError("skeleton parents must be topologically ordered")
        if not np.all(np.isfinite(offsets)):
            raise ConfigError("skeleton offsets must be finite")

    @property
    def joint_count(self):
        return len(self.parents)

    @property
    def pose_dim(self):
        return 12 * self.joint_count + 3

    def children(self, joint):
        return [i for i, p in enumerate(self.parents) if p == joint]


_SMPL_NAMES = (
    "pelvis", "left_hip", "right_hip", "spine1", "left_knee", "right_knee",
    "spine2", "left_ankle", "right_ankle", "spine3", "left_foot", "right_foot",
    "neck", "left_collar", "right_collar", "head", "left_shoulder",
    "right_shoulder", "left_elbow", "right_elbow", "left_wrist", "right_wrist",
    "left_hand", "right_hand",
)

_SMPL_PARENTS = (-1, 0, 0, 0, 1, 2, 3, 4, 5, 6, 7, 8, 9, 9, 9, 12, 13, 14,
                 16, 17, 18, 19, 20, 21)

# Plausible human-ish rest offsets (meters), Z-up, facing +Y.
_SMPL_OFFSETS = np.array([
    [0.00, 0.00, 0.95],    # pelvis (root height)
    [0.09, 0.00, -0.05],   # left_hip
    [-0.09, 0.00, -0.05],  # right_hip
    [0.00, 0.00, 0.11],    # spine1
    [0.00, 0.00, -0.40],   # left_knee
    [0.00, 0.00, -0.40],   # right_knee
    [0.00, 0.00, 0.13],    # spine2
    [0.00, 0.00, -0.42],   # left_ankle
    [0.00, 0.00, -0.42],   # right_ankle
    [0.00, 0.00, 0.06],    # spine3
    [0.00, 0.13, -0.06],   # left_foot
    [0.00, 0.13, -0.06],   # right_foot
    [0.00, 0.00, 0.22],    # neck
    [0.07, 0.00, 0.12],    # left_collar
    [-0.07, 0.00, 0.12],   # right_collar
    [0.00, 0.00, 0.10],    # head
    [0.10, 0.00, 0.02],    # left_shoulder
    [-0.10, 0.00, 0.02],   # right_shoulder
    [0.26, 0.00, 0.00],    # left_elbow
    [-0.26, 0.00, 0.00],   # right_elbow
    [0.25, 0.00, 0.00],    # left_wrist
    [-0.25, 0.00, 0.00],   # right_wrist
    [0.08, 0.00, 0.00],    # left_hand
    [-0.08, 0.00, 0.00],   # right_hand
])


def smpl24_skeleton():
    return Skeleton(
        names=_SMPL_NAMES,
        parents=_SMPL_PARENTS,
        offsets=_SMPL_OFFSETS.copy(),
        foot_joints=(10, 11),
    )


def toy8_skeleton():
    """Reduced rig for fast unit tests: spine chain plus four limbs."""
    return Skeleton(
        names=("root", "spine", "neck", "head", "left_arm", "right_arm",
               "left_leg", "right_leg"),
        parents=(-1, 0, 1, 2, 1, 1, 0, 0),
        offsets=np.array([
            [0.0, 0.0, 0.9],
            [0.0, 0.0, 0.3],
            [0.0, 0.0, 0.2],
            [0.0, 0.0, 0.15],
            [0.35, 0.0, 0.0],
            [-0.35, 0.0, 0.0],
            [0.12, 0.0, -0.8],
            [-0.12, 0.0, -0.8],
        ]),
        foot_joints=(6, 7),
    )


def skeleton_by_name(name):
    if name == "smpl24":
        return smpl24_skeleton()
    if name == "toy8":
        return toy8_skeleton()
    raise ConfigError(f"unknown skeleton '{name}' (expected smpl24 or toy8)")
