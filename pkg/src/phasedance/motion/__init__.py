"""Motion representation, kinematics, synthetic data, and export."""

from .export import export_bvh, export_frame_dump, export_motion, import_frame_dump
from .kinematics import compute_velocities, forward_kinematics
from .rotation import (
    axis_angle_to_matrix,
    euler_zyx_to_matrix,
    matrix_to_euler_zyx,
    matrix_to_quaternion,
    matrix_to_rot6d,
    quaternion_to_matrix,
    rot6d_to_matrix,
)
from .sequence import (
    ConditioningFeatures,
    GroupSample,
    MotionSequence,
    assemble_pose_vector,
    pose_dim,
    split_pose_vector,
)
from .skeleton import Skeleton, skeleton_by_name, smpl24_skeleton, toy8_skeleton
from .synth import SynthConfig, synth_conditioning, synth_group_dataset

__all__ = [
    "ConditioningFeatures",
    "GroupSample",
    "MotionSequence",
    "Skeleton",
    "SynthConfig",
    "assemble_pose_vector",
    "axis_angle_to_matrix",
    "compute_velocities",
    "euler_zyx_to_matrix",
    "export_bvh",
    "export_frame_dump",
    "export_motion",
    "forward_kinematics",
    "import_frame_dump",
    "matrix_to_euler_zyx",
    "matrix_to_quaternion",
    "matrix_to_rot6d",
    "pose_dim",
    "quaternion_to_matrix",
    "rot6d_to_matrix",
    "skeleton_by_name",
    "smpl24_skeleton",
    "split_pose_vector",
    "synth_conditioning",
    "synth_group_dataset",
    "toy8_skeleton",
]
