"""Rotation representations: 6D two-column form, matrices, quaternions, Euler.

The 6D form is the first two columns of a rotation matrix; decoding runs
Gram-Schmidt on them and completes the frame with a cross product, so it
is scale-invariant and continuous.
"""

from __future__ import annotations

import numpy as np

from ..errors import DegenerateInputError

_EPS = 1e-12


def rot6d_to_matrix(r6):
    """Decode (..., 6) two-column encodings into (..., 3, 3) rotations."""
    r6 = np.asarray(r6, dtype=np.float64)
    if r6.shape[-1] != 6:
        raise DegenerateInputError(f"6D rotation input must end in dim 6, got {r6.shape}")
    a1 = r6[..., 0:3]
    a2 = r6[..., 3:6]
    n1 = np.linalg.norm(a1, axis=-1, keepdims=True)
    if np.any(n1 < _EPS):
        raise DegenerateInputError("first 3-vector of a 6D rotation is zero")
    b1 = a1 / n1
    a2_perp = a2 - np.sum(b1 * a2, axis=-1, keepdims=True) * b1
    n2 = np.linalg.norm(a2_perp, axis=-1, keepdims=True)
    if np.any(n2 < _EPS):
        raise DegenerateInputError("6D rotation vectors are parallel or second is zero")
    b2 = a2_perp / n2
    b3 = np.cross(b1, b2)
    return np.stack([b1, b2, b3], axis=-1)


def matrix_to_rot6d(m):
    """First two columns of (..., 3, 3) rotations, flattened to (..., 6)."""
    m = np.asarray(m, dtype=np.float64)
    return np.concatenate([m[..., :, 0], m[..., :, 1]], axis=-1)


def axis_angle_to_matrix(axis, angle):
    """Rodrigues formula; axis (..., 3) need not be normalized."""
    axis = np.asarray(axis, dtype=np.float64)
    angle = np.asarray(angle, dtype=np.float64)
    norm = np.linalg.norm(axis, axis=-1, keepdims=True)
    if np.any(norm < _EPS):
        raise DegenerateInputError("axis-angle axis is zero")
    u = axis / norm
    ux, uy, uz = u[..., 0], u[..., 1], u[..., 2]
    zero = np.zeros_like(ux)
    k = np.stack([
        np.stack([zero, -uz, uy], axis=-1),
        np.stack([uz, zero, -ux], axis=-1),
        np.stack([-uy, ux, zero], axis=-1),
    ], axis=-2)
    eye = np.broadcast_to(np.eye(3), k.shape)
    s = np.sin(angle)[..., None, None]
    c = np.cos(angle)[..., None, None]
    return eye + s * k + (1.0 - c) * (k @ k)


def matrix_to_quaternion(m):
    """(..., 3, 3) -> unit quaternion (..., 4) as (w, x, y, z), w >= 0."""
    m = np.asarray(m, dtype=np.float64)
    batch = m.shape[:-2]
    flat = m.reshape((-1, 3, 3))
    out = np.empty((flat.shape[0], 4))
    for i, r in enumerate(flat):
        trace = r[0, 0] + r[1, 1] + r[2, 2]
        if trace > 0.0:
            s = np.sqrt(trace + 1.0) * 2.0
            w = 0.25 * s
            x = (r[2, 1] - r[1, 2]) / s
            y = (r[0, 2] - r[2, 0]) / s
            z = (r[1, 0] - r[0, 1]) / s
        elif r[0, 0] > r[1, 1] and r[0, 0] > r[2, 2]:
            s = np.sqrt(1.0 + r[0, 0] - r[1, 1] - r[2, 2]) * 2.0
            w = (r[2, 1] - r[1, 2]) / s
            x = 0.25 * s
            y = (r[0, 1] + r[1, 0]) / s
            z = (r[0, 2] + r[2, 0]) / s
        elif r[1, 1] > r[2, 2]:
            s = np.sqrt(1.0 + r[1, 1] - r[0, 0] - r[2, 2]) * 2.0
            w = (r[0, 2] - r[2, 0]) / s
            x = (r[0, 1] + r[1, 0]) / s
            y = 0.25 * s
            z = (r[1, 2] + r[2, 1]) / s
        else:
            s = np.sqrt(1.0 + r[2, 2] - r[0, 0] - r[1, 1]) * 2.0
            w = (r[1, 0] - r[0, 1]) / s
            x = (r[0, 2] + r[2, 0]) / s
            y = (r[1, 2] + r[2, 1]) / s
            z = 0.25 * s
        q = np.array([w, x, y, z])
        if q[0] < 0.0:
            q = -q
        out[i] = q / np.linalg.norm(q)
    return out.reshape(batch + (4,))


def quaternion_to_matrix(q):
    """(..., 4) (w, x, y, z) -> (..., 3, 3)."""
    q = np.asarray(q, dtype=np.float64)
    q = q / np.linalg.norm(q, axis=-1, keepdims=True)
    w, x, y, z = q[..., 0], q[..., 1], q[..., 2], q[..., 3]
    row0 = np.stack([1 - 2 * (y * y + z * z), 2 * (x * y - w * z), 2 * (x * z + w * y)], axis=-1)
    row1 = np.stack([2 * (x * y + w * z), 1 - 2 * (x * x + z * z), 2 * (y * z - w * x)], axis=-1)
    row2 = np.stack([2 * (x * z - w * y), 2 * (y * z + w * x), 1 - 2 * (x * x + y * y)], axis=-1)
    return np.stack([row0, row1, row2], axis=-2)


def matrix_to_euler_zyx(m):
    """Decompose R = Rz(a) @ Ry(b) @ Rx(c); returns (..., 3) radians (a, b, c)."""
    m = np.asarray(m, dtype=np.float64)
    sy = -m[..., 2, 0]
    sy = np.clip(sy, -1.0, 1.0)
    b = np.arcsin(sy)
    cos_b = np.cos(b)
    near_gimbal = np.abs(cos_b) < 1e-8
    a = np.where(near_gimbal,
                 np.arctan2(-m[..., 0, 1], m[..., 1, 1]),
                 np.arctan2(m[..., 1, 0], m[..., 0, 0]))
    c = np.where(near_gimbal,
                 np.zeros_like(b),
                 np.arctan2(m[..., 2, 1], m[..., 2, 2]))
    return np.stack([a, b, c], axis=-1)


def euler_zyx_to_matrix(abc):
    """Inverse of matrix_to_euler_zyx."""
    abc = np.asarray(abc, dtype=np.float64)
    a, b, c = abc[..., 0], abc[..., 1], abc[..., 2]
    za = axis_angle_to_matrix(np.broadcast_to([0.0, 0.0, 1.0], a.shape + (3,)), a)
    yb = axis_angle_to_matrix(np.broadcast_to([0.0, 1.0, 0.0], b.shape + (3,)), b)
    xc = axis_angle_to_matrix(np.broadcast_to([1.0, 0.0, 0.0], c.shape + (3,)), c)
    return za @ yb @ xc
