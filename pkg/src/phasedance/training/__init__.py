"""Losses, training loop, and checkpointing."""

from .checkpoint import load_checkpoint, save_checkpoint
from .loop import TrainConfig, fit
from .losses import (
    AblationFlags,
    LossWeights,
    TrainRecord,
    loss_consistency,
    loss_kl,
    loss_reconstruction,
    total_loss,
)

__all__ = [
    "AblationFlags",
    "LossWeights",
    "TrainConfig",
    "TrainRecord",
    "fit",
    "load_checkpoint",
    "loss_consistency",
    "loss_kl",
    "loss_reconstruction",
    "save_checkpoint",
    "total_loss",
]
