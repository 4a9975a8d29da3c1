"""Differentiable-numerics foundation: tensors, ops, DFT, Adam."""

from .dft import ComplexCoefficients, dft_real
from .distributions import gaussian_kl, reparameterize
from .gradcheck import grad_check
from .optim import OptimizerState, adam_step, clip_global_norm
from .siren import siren, siren_init_first, siren_init_hidden
from .tensor import (
    AllocationStats,
    Tensor,
    allocation_stats,
    as_tensor,
    no_grad,
    set_debug_checks,
    zero_grads,
)
from . import ops

__all__ = [
    "AllocationStats",
    "ComplexCoefficients",
    "OptimizerState",
    "Tensor",
    "adam_step",
    "allocation_stats",
    "as_tensor",
    "clip_global_norm",
    "dft_real",
    "gaussian_kl",
    "grad_check",
    "no_grad",
    "ops",
    "reparameterize",
    "set_debug_checks",
    "siren",
    "siren_init_first",
    "siren_init_hidden",
    "zero_grads",
]
