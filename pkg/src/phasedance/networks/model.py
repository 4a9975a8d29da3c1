"""The conditional phase-VAE: encoder, prior, decoder, trajectory head.

Encoder: motion embedding queries cross-attention over the conditioning
track, projected to D latent curves, then the shared frequency-domain
extraction heads. Prior: self-attention over the conditioning only,
through the same extraction heads, so posterior and prior live in one
parameter space. Decoder: reconstructed sinusoidal curves query
cross-attention over the conditioning and project back to pose vectors;
the curves already span time, so the decoder query needs no positional
proxy.
"""

from __future__ import annotations

from collections import OrderedDict
from dataclasses import dataclass

import numpy as np

from ..diffmath import Tensor, as_tensor, no_grad, ops
from ..errors import ConfigError, ShapeError
from ..motion import ConditioningFeatures, GroupSample, MotionSequence
from ..phase import extract_phase_distribution, reconstruct_curves, sample_phase
from .layers import (
    AttentionBlock,
    Linear,
    ShiftHead,
    SigmaHead,
    TrajectoryPredictor,
    sinusoidal_positions,
)

_CONFIG_FIELDS = ("layers", "hidden", "heads", "phase_channels", "cond_dim",
                  "pose_dim", "window", "siren_omega", "dropout")


@dataclass
class ModelConfig:
    """Desk-scale defaults; the documented full-scale setting is
    layers=5, hidden=512, phase_channels=256 (see README)."""

    layers: int = 2
    hidden: int = 64
    heads: int = 4
    phase_channels: int = 8
    cond_dim: int = 5
    pose_dim: int = 291
    window: int = 64
    siren_omega: float = 30.0
    dropout: float = 0.0

    def __post_init__(self):
        for name in ("layers", "hidden", "heads", "phase_channels",
                     "cond_dim", "pose_dim", "window"):
            if getattr(self, name) < 1:
                raise ConfigError(f"model config field {name} must be positive")
        if self.hidden % self.heads != 0:
            raise ConfigError("head count must divide hidden size")
        if self.window < 2:
            raise ConfigError("window must be at least 2 frames")
        if self.siren_omega <= 0:
            raise ConfigError("siren omega must be positive")
        if self.dropout != 0.0:
            raise ConfigError("dropout is fixed at 0 at desk scale")

    def to_dict(self):
        return {name: getattr(self, name) for name in _CONFIG_FIELDS}

    @classmethod
    def from_dict(cls, data):
        unknown = set(data) - set(_CONFIG_FIELDS)
        if unknown:
            raise ConfigError(f"unknown model config keys: {sorted(unknown)}")
        return cls(**data)


class PhaseDanceModel:
    """Parameter container plus the forward paths."""

    def __init__(self, config, seed=0):
        self.config = config
        rng = np.random.default_rng(seed)
        c = config
        self.motion_embed = Linear(c.pose_dim, c.hidden, rng)
        self.enc_cond_embed = Linear(c.cond_dim, c.hidden, rng)
        self.encoder_blocks = [
            AttentionBlock(c.hidden, c.heads, c.siren_omega, rng)
            for _ in range(c.layers)
        ]
        self.enc_out = Linear(c.hidden, c.phase_channels, rng)
        self.prior_cond_embed = Linear(c.cond_dim, c.hidden, rng)
        self.prior_blocks = [
            AttentionBlock(c.hidden, c.heads, c.siren_omega, rng)
            for _ in range(c.layers)
        ]
        self.prior_out = Linear(c.hidden, c.phase_channels, rng)
        self.shift_head = ShiftHead(c.window, rng)
        self.sigma_head = SigmaHead(c.window, c.siren_omega, rng)
        self.curve_embed = Linear(c.phase_channels, c.hidden, rng)
        self.dec_cond_embed = Linear(c.cond_dim, c.hidden, rng)
        self.decoder_blocks = [
            AttentionBlock(c.hidden, c.heads, c.siren_omega, rng)
            for _ in range(c.layers)
        ]
        self.dec_out = Linear(c.hidden, c.pose_dim, rng)
        self.trajectory = TrajectoryPredictor(c.pose_dim, c.siren_omega, rng)
        self.prior_calls = 0
        root_mask = np.ones(c.pose_dim)
        root_mask[-3:] = 0.0
        self._root_mask = root_mask

    def named_params(self):
        out = OrderedDict()

        def put(prefix, pairs):
            for name, tensor in pairs:
                out[f"{prefix}.{name}"] = tensor

        put("motion_embed", self.motion_embed.params())
        put("enc_cond_embed", self.enc_cond_embed.params())
        for i, block in enumerate(self.encoder_blocks):
            put(f"encoder.{i}", block.params())
        put("enc_out", self.enc_out.params())
        put("prior_cond_embed", self.prior_cond_embed.params())
        for i, block in enumerate(self.prior_blocks):
            put(f"prior.{i}", block.params())
        put("prior_out", self.prior_out.params())
        put("shift_head", self.shift_head.params())
        put("sigma_head", self.sigma_head.params())
        put("curve_embed", self.curve_embed.params())
        put("dec_cond_embed", self.dec_cond_embed.params())
        for i, block in enumerate(self.decoder_blocks):
            put(f"decoder.{i}", block.params())
        put("dec_out", self.dec_out.params())
        put("trajectory", self.trajectory.params())
        return out

    def param_list(self):
        return list(self.named_params().values())

    def param_count(self):
        return sum(t.size for t in self.param_list())


def _cond_features(cond):
    if isinstance(cond, ConditioningFeatures):
        return cond.features
    return np.asarray(cond, dtype=np.float64)


def _poses(motion):
    if isinstance(motion, MotionSequence):
        return motion.poses
    return motion


def encoder_latent_curves(model, motion, cond):
    """Cross-attention encoding to (D, T) latent curves."""
    c = model.config
    poses = as_tensor(_poses(motion))
    feats = as_tensor(_cond_features(cond))
    if poses.shape[0] != feats.shape[0]:
        raise ShapeError("motion and conditioning must share the frame count")
    if poses.shape[0] != c.window:
        raise ShapeError(
            f"encoder expects the training window of {c.window} frames, "
            f"got {poses.shape[0]}"
        )
    pe = sinusoidal_positions(c.window, c.hidden)
    x = ops.add(model.motion_embed(poses), pe)
    kv = ops.add(model.enc_cond_embed(feats), pe)
    for block in model.encoder_blocks:
        x = block(x, kv)
    return ops.transpose(model.enc_out(x))


def prior_latent_curves(model, cond):
    """Self-attention encoding of the conditioning to (D, T) curves.

    This is the single prior network pass; group generation calls it
    exactly once regardless of the dancer count.
    """
    c = model.config
    feats = as_tensor(_cond_features(cond))
    if feats.shape[0] != c.window:
        raise ShapeError(
            f"prior expects the training window of {c.window} frames, "
            f"got {feats.shape[0]}"
        )
    model.prior_calls += 1
    pe = sinusoidal_positions(c.window, c.hidden)
    x = ops.add(model.prior_cond_embed(feats), pe)
    for block in model.prior_blocks:
        x = block(x, x)
    return ops.transpose(model.prior_out(x))


def encode(model, motion, cond):
    """Posterior over phase parameters given motion and conditioning."""
    curves = encoder_latent_curves(model, motion, cond)
    return extract_phase_distribution(curves, model.shift_head, model.sigma_head)


def prior(model, cond):
    """Prior over phase parameters given conditioning only."""
    curves = prior_latent_curves(model, cond)
    return extract_phase_distribution(curves, model.shift_head, model.sigma_head)


def decode_curves(model, curves, cond):
    """Decode (D, T) latent curves against the conditioning track."""
    feats = as_tensor(_cond_features(cond))
    t_frames = feats.shape[0]
    if curves.shape[1] != t_frames:
        raise ShapeError("latent curves and conditioning must share frames")
    pe = sinusoidal_positions(t_frames, model.config.hidden)
    q = model.curve_embed(ops.transpose(curves))
    kv = ops.add(model.dec_cond_embed(feats), pe)
    for block in model.decoder_blocks:
        q = block(q, kv)
    out = model.dec_out(q)
    return ops.mul(out, model._root_mask)


def decode(model, z, cond, t_frames=None):
    """Local motion (root channels zeroed) from one phase sample."""
    if t_frames is None:
        t_frames = _cond_features(cond).shape[0]
    curves = reconstruct_curves(z, t_frames)
    return decode_curves(model, curves, cond)


def predict_trajectory(model, local_motion):
    """Per-frame root translations from local motion (cumulative deltas)."""
    return model.trajectory(as_tensor(local_motion))


def compose_motion(local_motion, trajectory):
    """Full pose tensor: local channels plus predicted root translation."""
    body = ops.getitem(local_motion, (slice(None), slice(0, -3)))
    return ops.concat([body, trajectory], axis=1)


def generate_group(model, cond, dancers, seed, mode="pdvae"):
    """Sample a whole group from one prior pass.

    The prior runs once; each dancer then draws its own (A, S) noise and
    is decoded sequentially, so the transient working set is independent
    of the dancer count and only the outputs accumulate.
    """
    if dancers < 1:
        raise ConfigError("generate_group needs at least one dancer")
    if mode not in ("pdvae", "ablate-no-phase"):
        raise ConfigError(f"unknown generation mode '{mode}'")
    if not isinstance(cond, ConditioningFeatures):
        cond = ConditioningFeatures(features=_cond_features(cond))
    joint_count = (model.config.pose_dim - 3) // 12
    rng = np.random.default_rng(seed)
    sequences = []
    with no_grad():
        if mode == "pdvae":
            dist = prior(model, cond)
            for _ in range(dancers):
                noise = rng.normal(size=(2, dist.channels))
                z = sample_phase(dist, noise)
                local = decode(model, z, cond)
                trajectory = predict_trajectory(model, local)
                poses = local.to_numpy()
                poses[:, -3:] = trajectory.to_numpy()
                sequences.append(MotionSequence(poses=poses, joint_count=joint_count))
        else:
            curves = prior_latent_curves(model, cond)
            for _ in range(dancers):
                local = decode_curves(model, curves, cond)
                trajectory = predict_trajectory(model, local)
                poses = local.to_numpy()
                poses[:, -3:] = trajectory.to_numpy()
                sequences.append(MotionSequence(poses=poses, joint_count=joint_count))
    return GroupSample(group_id=f"generated-{seed}", dancers=sequences,
                       conditioning=cond)
