"""Encoder/prior/decoder networks and attention building blocks."""

from .layers import (
    AttentionBlock,
    Linear,
    ShiftHead,
    SigmaHead,
    TrajectoryPredictor,
    multi_head_attention,
    sinusoidal_positions,
)
from .model import (
    ModelConfig,
    PhaseDanceModel,
    compose_motion,
    decode,
    decode_curves,
    encode,
    encoder_latent_curves,
    generate_group,
    predict_trajectory,
    prior,
    prior_latent_curves,
)

__all__ = [
    "AttentionBlock",
    "Linear",
    "ModelConfig",
    "PhaseDanceModel",
    "ShiftHead",
    "SigmaHead",
    "TrajectoryPredictor",
    "compose_motion",
    "decode",
    "decode_curves",
    "encode",
    "encoder_latent_curves",
    "generate_group",
    "multi_head_attention",
    "predict_trajectory",
    "prior",
    "prior_latent_curves",
    "sinusoidal_positions",
]
