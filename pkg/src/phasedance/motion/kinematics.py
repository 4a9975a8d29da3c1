"""Forward kinematics and finite-difference velocities."""

from __future__ import annotations

import numpy as np

from ..errors import ShapeError


def forward_kinematics(skeleton, rotations, root_translation):
    """Global joint positions from local joint rotations.

    rotations: (..., J, 3, 3) local rotation per joint;
    root_translation: (..., 3). Returns positions (..., J, 3) with
    position[j] = position[parent] + R_global[parent] @ offset[j] and the
    root pinned to root_translation.
    """
    rotations = np.asarray(rotations, dtype=np.float64)
    root_translation = np.asarray(root_translation, dtype=np.float64)
    j = skeleton.joint_count
    if rotations.shape[-3:] != (j, 3, 3):
        raise ShapeError(f"rotations must be (..., {j}, 3, 3), got {rotations.shape}")
    batch = rotations.shape[:-3]
    if root_translation.shape != batch + (3,):
        raise ShapeError("root translation batch dims must match rotations")

    globals_r = np.empty_like(rotations)
    positions = np.empty(batch + (j, 3))
    globals_r[..., 0, :, :] = rotations[..., 0, :, :]
    positions[..., 0, :] = root_translation
    for joint in range(1, j):
        parent = skeleton.parents[joint]
        parent_rot = globals_r[..., parent, :, :]
        offset = skeleton.offsets[joint]
        positions[..., joint, :] = (
            positions[..., parent, :] + parent_rot @ offset
        )
        globals_r[..., joint, :, :] = parent_rot @ rotations[..., joint, :, :]
    return positions


def compute_velocities(positions):
    """Per-frame velocities (m/frame): central differences inside the
    window, one-sided at the boundaries."""
    positions = np.asarray(positions, dtype=np.float64)
    t = positions.shape[0]
    if t < 2:
        raise ShapeError("compute_velocities requires at least 2 frames")
    vel = np.empty_like(positions)
    vel[0] = positions[1] - positions[0]
    vel[-1] = positions[-1] - positions[-2]
    if t > 2:
        vel[1:-1] = 0.5 * (positions[2:] - positions[:-2])
    return vel
