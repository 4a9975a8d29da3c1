"""Evaluation metrics for individual motions and groups.

All functions are pure, deterministic, and invariant to dancer order.
The Frechet-style distances use in-package feature extractors (kinetic
vectors for individual motions, relative group statistics for groups),
not an external learned extractor, so absolute values are NOT comparable
to published benchmark tables; every report carries the parameter echo.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DegenerateInputError, ShapeError


@dataclass
class MetricConfig:
    mmc_sigma: float = 3.0        # frames
    tif_radius: float = 0.4       # meters
    gmc_lag_divisor: int = 4      # lag window L = T // divisor
    foot_joints: tuple = (10, 11)

    def to_dict(self):
        return {
            "mmc_sigma": self.mmc_sigma,
            "tif_radius": self.tif_radius,
            "gmc_lag_divisor": self.gmc_lag_divisor,
            "foot_joints": list(self.foot_joints),
        }


@dataclass
class GaussianFit:
    """Mean and (regularized) covariance of a feature set."""

    mean: np.ndarray
    cov: np.ndarray

    @classmethod
    def from_features(cls, rows, regularization=1e-6):
        rows = np.asarray(rows, dtype=np.float64)
        if rows.ndim != 2 or rows.shape[0] < 2:
            raise DegenerateInputError("Gaussian fit needs >= 2 feature rows")
        mean = rows.mean(axis=0)
        cov = np.cov(rows, rowvar=False)
        cov = np.atleast_2d(cov) + regularization * np.eye(rows.shape[1])
        return cls(mean=mean, cov=cov)


def kinetic_features(motion):
    """Per-joint mean kinetic energy, unit mass: (1/T) sum_t 0.5 |v_j|^2."""
    if motion.frames < 2:
        raise ShapeError("kinetic features need at least 2 frames")
    vel = motion.velocities()
    return 0.5 * np.mean(np.sum(vel * vel, axis=-1), axis=0)


def gen_div(motions):
    """Mean pairwise distance of kinetic features over unordered pairs."""
    if len(motions) < 2:
        raise DegenerateInputError("gen_div needs at least 2 motions")
    feats = np.stack([kinetic_features(m) for m in motions])
    total, count = 0.0, 0
    for i in range(len(feats)):
        for j in range(i + 1, len(feats)):
            total += float(np.linalg.norm(feats[i] - feats[j]))
            count += 1
    return total / count


def mean_joint_speed(motion):
    """Mean over joints of per-frame velocity magnitude, length T."""
    vel = motion.velocities()
    return np.mean(np.linalg.norm(vel, axis=-1), axis=-1)


def kinematic_beats(speed):
    """Frames where mean joint speed is a local minimum."""
    speed = np.asarray(speed)
    beats = []
    for t in range(1, len(speed) - 1):
        if speed[t] <= speed[t - 1] and speed[t] <= speed[t + 1] and \
                (speed[t] < speed[t - 1] or speed[t] < speed[t + 1]):
            beats.append(t)
    return np.array(beats, dtype=int)


def mmc(motion, beats, sigma=3.0):
    """Motion-music consistency in (0, 1]: Gaussian kernel on the offset
    between each music beat and its nearest kinematic beat."""
    beats = np.asarray(beats, dtype=np.float64)
    if beats.size == 0:
        raise DegenerateInputError("mmc needs a non-empty beat list")
    kin = kinematic_beats(mean_joint_speed(motion))
    if kin.size == 0:
        return 0.0
    offsets = np.min((beats[:, None] - kin[None, :]) ** 2, axis=1)
    return float(np.mean(np.exp(-offsets / (2.0 * sigma * sigma))))


def pfc(motion, foot_joints, skip_frames=0):
    """Physical foot contact score (lower is better).

    s(t) = |a_COM,horiz(t)| * |v_leftfoot(t)| * |v_rightfoot(t)|,
    normalized by the peak horizontal COM acceleration.
    """
    if motion.frames < 3:
        raise ShapeError("pfc needs at least 3 frames")
    left, right = foot_joints
    if max(left, right) >= motion.joint_count or min(left, right) < 0:
        raise ShapeError(
            f"foot joints {foot_joints} out of range for {motion.joint_count} joints"
        )
    positions = motion.positions()
    com = positions.mean(axis=1)
    com_vel = np.gradient(com, axis=0)
    com_acc = np.gradient(com_vel, axis=0)
    acc_h = np.linalg.norm(com_acc[:, :2], axis=-1)
    vel = motion.velocities()
    vl = np.linalg.norm(vel[:, left], axis=-1)
    vr = np.linalg.norm(vel[:, right], axis=-1)
    s = acc_h * vl * vr
    peak = float(np.max(acc_h))
    if peak == 0.0:
        return 0.0
    return float(np.mean(s) / peak)


def _normalized_xcorr_max(x, y, max_lag):
    """Max over lags in [-L, L] of the circular normalized correlation.

    Circular lags keep the metric exactly invariant when every signal is
    shifted by the same amount.
    """
    xc = (x - x.mean()) / x.std()
    yc = (y - y.mean()) / y.std()
    best = -1.0
    for lag in range(-max_lag, max_lag + 1):
        r = float(np.mean(xc * np.roll(yc, -lag)))
        if r > best:
            best = r
    return max(best, 0.0)


def gmc(group, lag_divisor=4):
    """Group motion correlation in [0, 100]: mean over unordered dancer
    pairs of the max-lag circular normalized cross-correlation of
    mean-joint-speed signals. A zero-variance signal contributes 0 for
    its pairs."""
    if group.dancer_count < 2:
        raise DegenerateInputError("gmc needs at least 2 dancers")
    speeds = [mean_joint_speed(d) for d in group.dancers]
    max_lag = group.frames // lag_divisor
    total, count = 0.0, 0
    for i in range(len(speeds)):
        for j in range(i + 1, len(speeds)):
            if speeds[i].std() == 0.0 or speeds[j].std() == 0.0:
                r = 0.0
            else:
                r = _normalized_xcorr_max(speeds[i], speeds[j], max_lag)
            total += r
            count += 1
    return 100.0 * total / count


def tif(group, radius=0.4):
    """Trajectory intersection frequency in [0, 1]: fraction of
    (frame, dancer-pair) events with root distance below the radius."""
    if group.dancer_count < 2:
        raise DegenerateInputError("tif needs at least 2 dancers")
    if radius <= 0:
        raise DegenerateInputError("tif radius must be positive")
    roots = np.stack([d.root() for d in group.dancers])  # (N, T, 3)
    hits, events = 0, 0
    n = roots.shape[0]
    for i in range(n):
        for j in range(i + 1, n):
            dist = np.linalg.norm(roots[i] - roots[j], axis=-1)
            hits += int(np.sum(dist < radius))
            events += dist.shape[0]
    return hits / events


def frechet_distance(fit_a, fit_b):
    """Frechet distance between two Gaussian fits:
    |mu_a - mu_b|^2 + tr(S_a + S_b - 2 (S_a S_b)^(1/2))."""
    if fit_a.mean.shape != fit_b.mean.shape:
        raise ShapeError("Gaussian fits have different dimensions")
    diff = fit_a.mean - fit_b.mean
    # tr sqrtm(Sa Sb) via eigendecomposition of the symmetrized product
    # Sa^(1/2) Sb Sa^(1/2), which is symmetric PSD.
    vals_a, vecs_a = np.linalg.eigh(fit_a.cov)
    vals_a = np.clip(vals_a, 0.0, None)
    root_a = (vecs_a * np.sqrt(vals_a)) @ vecs_a.T
    inner = root_a @ fit_b.cov @ root_a
    inner = 0.5 * (inner + inner.T)
    vals = np.clip(np.linalg.eigvalsh(inner), 0.0, None)
    trace_sqrt = float(np.sum(np.sqrt(vals)))
    value = float(diff @ diff + np.trace(fit_a.cov) + np.trace(fit_b.cov)
                  - 2.0 * trace_sqrt)
    return max(value, 0.0)


def group_features(group):
    """Translation-invariant group descriptor: (mean, std) of pairwise
    root distances, (mean, std) of pairwise speed correlations at lag 0,
    then the mean kinetic feature over dancers."""
    if group.dancer_count < 2:
        raise DegenerateInputError("group features need at least 2 dancers")
    roots = np.stack([d.root() for d in group.dancers])
    speeds = [mean_joint_speed(d) for d in group.dancers]
    dists, corrs = [], []
    n = group.dancer_count
    for i in range(n):
        for j in range(i + 1, n):
            dists.extend(np.linalg.norm(roots[i] - roots[j], axis=-1))
            si, sj = speeds[i], speeds[j]
            if si.std() == 0.0 or sj.std() == 0.0:
                corrs.append(0.0)
            else:
                corrs.append(float(np.mean(
                    (si - si.mean()) * (sj - sj.mean())) / (si.std() * sj.std())))
    dists = np.asarray(dists)
    corrs = np.asarray(corrs)
    kin = np.mean([kinetic_features(d) for d in group.dancers], axis=0)
    return np.concatenate([
        [dists.mean(), dists.std(), corrs.mean(), corrs.std()], kin
    ])
