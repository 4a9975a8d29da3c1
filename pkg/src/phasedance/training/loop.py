"""The training loop: shuffled group batches, Adam, per-step records."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ..diffmath import OptimizerState, adam_step, clip_global_norm, zero_grads
from ..errors import ConfigError, NonFiniteError, TrainingDiverged
from .losses import AblationFlags, LossWeights, TrainRecord, total_loss


@dataclass
class TrainConfig:
    learning_rate: float = 1e-4
    batch_groups: int = 1        # a batch element is a group (full-scale: 32)
    steps: int = 2000
    seed: int = 0
    disable_consistency: bool = False
    disable_phase_manifold: bool = False
    pairing: str = "random-pair"
    clip_norm: float = 1.0
    adam_beta1: float = 0.9
    adam_beta2: float = 0.999
    adam_eps: float = 1e-8

    def __post_init__(self):
        if self.learning_rate <= 0.0:
            raise ConfigError("learning rate must be positive")
        if self.steps < 0 or self.batch_groups < 1:
            raise ConfigError("step budget must be >= 0 and batch size >= 1")
        if self.pairing not in ("random-pair", "all-pairs"):
            raise ConfigError(f"unknown pairing '{self.pairing}'")

    def to_dict(self):
        return {
            "learning_rate": self.learning_rate,
            "batch_groups": self.batch_groups,
            "steps": self.steps,
            "seed": self.seed,
            "disable_consistency": self.disable_consistency,
            "disable_phase_manifold": self.disable_phase_manifold,
            "pairing": self.pairing,
            "clip_norm": self.clip_norm,
            "adam_beta1": self.adam_beta1,
            "adam_beta2": self.adam_beta2,
            "adam_eps": self.adam_eps,
        }

    def flags(self):
        return AblationFlags(
            disable_consistency=self.disable_consistency,
            disable_phase_manifold=self.disable_phase_manifold,
        )


def fit(dataset, model, config, weights=None, state=None, start_step=0,
        on_record=None):
    """Train in place; returns (model, records).

    Deterministic for a fixed seed in single-threaded execution: the
    shuffle, sampling-noise and pairing streams are spawned from the
    seed independently, so ablation flags do not shift the noise
    sequence. A non-finite loss aborts with TrainingDiverged carrying a
    diagnostic record; parameters keep their last good values because
    the failing step never reaches the optimizer.
    """
    if not dataset:
        raise ConfigError("fit needs a non-empty dataset")
    weights = weights if weights is not None else LossWeights()
    shuffle_seq, noise_seq, pair_seq = np.random.SeedSequence(config.seed).spawn(3)
    shuffle_rng = np.random.default_rng(shuffle_seq)
    noise_rng = np.random.default_rng(noise_seq)
    pair_rng = np.random.default_rng(pair_seq)

    params = model.param_list()
    if state is None:
        state = OptimizerState.for_params(params)
    flags = config.flags()
    records = []
    step = start_step
    end_step = start_step + config.steps
    while step < end_step:
        order = shuffle_rng.permutation(len(dataset))
        for lo in range(0, len(order), config.batch_groups):
            if step >= end_step:
                break
            batch = [dataset[i] for i in order[lo: lo + config.batch_groups]]
            zero_grads(params)
            try:
                loss, record = total_loss(
                    batch, model, weights, flags, noise_rng,
                    pair_rng=pair_rng, pairing=config.pairing,
                )
            except NonFiniteError as exc:
                diagnostic = TrainRecord(
                    step=step, reconstruction=math.nan, kl=math.nan,
                    consistency=math.nan, total=math.nan,
                )
                records.append(diagnostic)
                raise TrainingDiverged(
                    f"non-finite forward at step {step}: {exc}", records
                ) from exc
            record.step = step
            if not math.isfinite(record.total):
                records.append(record)
                raise TrainingDiverged(
                    f"non-finite loss at step {step}", records
                )
            loss.backward()
            grads = [p.grad for p in params]
            clip_global_norm(grads, config.clip_norm)
            adam_step(params, grads, state, config.learning_rate,
                      beta1=config.adam_beta1, beta2=config.adam_beta2,
                      eps=config.adam_eps)
            records.append(record)
            if on_record is not None:
                on_record(record)
            step += 1
    return model, records, state
