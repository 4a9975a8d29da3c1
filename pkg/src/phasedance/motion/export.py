"""Motion serialization: line-oriented frame dumps and BVH.

Frame dump: header line, then one line per frame holding the frame
index, root xyz, per-joint quaternions (wxyz) and per-joint positions.
BVH: HIERARCHY from the skeleton (Z-up), channels in ZYX Euler order,
frame time 1/30 s.
"""

from __future__ import annotations

import numpy as np

from ..errors import ConfigError, DegenerateInputError, ShapeError
from .kinematics import compute_velocities
from .rotation import (
    matrix_to_euler_zyx,
    matrix_to_quaternion,
    matrix_to_rot6d,
    quaternion_to_matrix,
    rot6d_to_matrix,
)
from .sequence import MotionSequence, assemble_pose_vector, split_pose_vector

_FRAME_TIME = 1.0 / 30.0


def export_motion(sequence, format_tag, skeleton=None):
    """Serialize a MotionSequence; format_tag is 'frame-dump' or 'bvh'."""
    if sequence.frames == 0:
        raise DegenerateInputError("cannot export an empty sequence")
    if format_tag == "frame-dump":
        return export_frame_dump(sequence).encode()
    if format_tag == "bvh":
        if skeleton is None:
            raise ConfigError("bvh export requires the skeleton")
        return export_bvh(sequence, skeleton).encode()
    raise ConfigError(f"unsupported export format '{format_tag}'")


def export_frame_dump(sequence):
    rot6d, positions, _, root = split_pose_vector(sequence.poses, sequence.joint_count)
    quats = matrix_to_quaternion(rot6d_to_matrix(rot6d))
    lines = [f"framedump v1 joints={sequence.joint_count} frames={sequence.frames}"]
    for f in range(sequence.frames):
        fields = [str(f)]
        fields += [f"{v:.12g}" for v in root[f]]
        fields += [f"{v:.12g}" for v in quats[f].reshape(-1)]
        fields += [f"{v:.12g}" for v in positions[f].reshape(-1)]
        lines.append(" ".join(fields))
    return "\n".join(lines) + "\n"


def import_frame_dump(data):
    """Rebuild a MotionSequence from a frame dump (velocities recomputed)."""
    text = data.decode() if isinstance(data, bytes) else data
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if not lines or not lines[0].startswith("framedump v1"):
        raise ShapeError("not a frame dump (missing header)")
    header = dict(tok.split("=") for tok in lines[0].split()[2:])
    joints, frames = int(header["joints"]), int(header["frames"])
    if len(lines) - 1 != frames:
        raise ShapeError("frame dump line count disagrees with header")
    quats = np.empty((frames, joints, 4))
    positions = np.empty((frames, joints, 3))
    root = np.empty((frames, 3))
    for f, line in enumerate(lines[1:]):
        values = line.split()
        expected = 1 + 3 + 4 * joints + 3 * joints
        if len(values) != expected:
            raise ShapeError(f"frame {f}: expected {expected} fields, got {len(values)}")
        floats = np.array([float(v) for v in values[1:]])
        root[f] = floats[:3]
        quats[f] = floats[3: 3 + 4 * joints].reshape(joints, 4)
        positions[f] = floats[3 + 4 * joints:].reshape(joints, 3)
    rot6d = matrix_to_rot6d(quaternion_to_matrix(quats))
    velocities = compute_velocities(positions) if frames >= 2 else np.zeros_like(positions)
    poses = assemble_pose_vector(rot6d, positions, velocities, root)
    return MotionSequence(poses=poses, joint_count=joints)


def _write_bvh_joint(lines, skeleton, joint, indent, order):
    pad = "  " * indent
    offset = skeleton.offsets[joint]
    if joint == 0:
        lines.append(f"{pad}ROOT {skeleton.names[joint]}")
        lines.append(pad + "{")
        lines.append(f"{pad}  OFFSET 0 0 0")
        lines.append(
            f"{pad}  CHANNELS 6 Xposition Yposition Zposition "
            "Zrotation Yrotation Xrotation"
        )
    else:
        lines.append(f"{pad}JOINT {skeleton.names[joint]}")
        lines.append(pad + "{")
        lines.append(
            f"{pad}  OFFSET {offset[0]:.6f} {offset[1]:.6f} {offset[2]:.6f}"
        )
        lines.append(f"{pad}  CHANNELS 3 Zrotation Yrotation Xrotation")
    order.append(joint)
    children = skeleton.children(joint)
    if children:
        for child in children:
            _write_bvh_joint(lines, skeleton, child, indent + 1, order)
    else:
        lines.append(f"{pad}  End Site")
        lines.append(pad + "  {")
        lines.append(f"{pad}    OFFSET 0 0 0")
        lines.append(pad + "  }")
    lines.append(pad + "}")


def export_bvh(sequence, skeleton):
    if sequence.joint_count != skeleton.joint_count:
        raise ShapeError("sequence joint count differs from skeleton")
    rot6d, _, _, root = split_pose_vector(sequence.poses, sequence.joint_count)
    euler_deg = np.degrees(matrix_to_euler_zyx(rot6d_to_matrix(rot6d)))

    lines = ["HIERARCHY"]
    order = []
    _write_bvh_joint(lines, skeleton, 0, 0, order)
    lines.append("MOTION")
    lines.append(f"Frames: {sequence.frames}")
    lines.append(f"Frame Time: {_FRAME_TIME:.7f}")
    for f in range(sequence.frames):
        fields = [f"{v:.6f}" for v in root[f]]
        for joint in order:
            fields += [f"{v:.6f}" for v in euler_deg[f, joint]]
        lines.append(" ".join(fields))
    return "\n".join(lines) + "\n"
