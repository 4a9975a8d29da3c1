"""Training objective: reconstruction + weighted KL + group consistency."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..diffmath import Tensor, gaussian_kl, ops
from ..errors import ConfigError, ShapeError
from ..motion import MotionSequence
from ..networks import (
    compose_motion,
    decode,
    decode_curves,
    encode,
    encoder_latent_curves,
    predict_trajectory,
    prior,
)
from ..phase import manifold_from_distribution, phase_distance, sample_phase


@dataclass
class LossWeights:
    kl: float = 5e-4
    consistency: float = 1e-4

    def __post_init__(self):
        if self.kl < 0.0 or self.consistency < 0.0:
            raise ConfigError("loss weights must be non-negative")

    def to_dict(self):
        return {"kl": self.kl, "consistency": self.consistency}


@dataclass
class AblationFlags:
    disable_consistency: bool = False
    disable_phase_manifold: bool = False


@dataclass
class TrainRecord:
    step: int
    reconstruction: float
    kl: float
    consistency: float
    total: float

    def check(self, weights, tol=1e-12):
        expected = (self.reconstruction + weights.kl * self.kl
                    + weights.consistency * self.consistency)
        if abs(self.total - expected) > tol:
            raise ShapeError("loss bookkeeping identity violated")
        return self


def loss_reconstruction(predicted, target):
    """Mean smooth-L1 (beta = 1) over all pose elements."""
    if isinstance(predicted, MotionSequence):
        predicted = Tensor(predicted.poses)
    if isinstance(target, MotionSequence):
        target = Tensor(target.poses)
    return ops.smooth_l1_mean(predicted, target)


def loss_kl(posterior, prior_dist):
    """Divergence between phase distributions.

    Stochastic dims (A, S) use the Gaussian KL; the deterministic dims
    (F, B) have zero variance on both sides, so a Dirac-vs-Dirac KL is
    0-or-infinity. They instead contribute 1/2 (mu_q - mu_p)^2 per dim
    (the Gaussian KL with both variances pinned to one), which keeps the
    gradient informative.
    """
    if posterior.channels != prior_dist.channels:
        raise ShapeError("posterior and prior have different channel counts")
    stochastic = ops.add(
        gaussian_kl(posterior.mu_amp, posterior.sigma_amp,
                    prior_dist.mu_amp, prior_dist.sigma_amp),
        gaussian_kl(posterior.mu_shift, posterior.sigma_shift,
                    prior_dist.mu_shift, prior_dist.sigma_shift),
    )
    deterministic = ops.scale(
        ops.add(
            ops.tsum(ops.square(ops.sub(posterior.mu_freq, prior_dist.mu_freq))),
            ops.tsum(ops.square(ops.sub(posterior.mu_off, prior_dist.mu_off))),
        ),
        0.5,
    )
    return ops.add(stochastic, deterministic)


def loss_consistency(posteriors, points=None, pairing="random-pair", rng=None):
    """Group phase-manifold coherence.

    Mean over selected (m, n) pairs of KL(q_m || q_n) plus the squared
    manifold distance. Points default to the noise-free embedding of
    each distribution's means, so sampling variance cannot corrupt the
    loss. 'all-pairs' uses unordered pairs with the KL taken in (m, n)
    order; 'random-pair' draws one ordered pair per call. Solo groups
    return 0.
    """
    n = len(posteriors)
    if n < 2:
        return Tensor(0.0)
    if pairing == "all-pairs":
        pairs = [(m, k) for m in range(n) for k in range(m + 1, n)]
    elif pairing == "random-pair":
        if rng is None:
            raise ConfigError("random-pair pairing needs an rng")
        m = int(rng.integers(n))
        k = int(rng.integers(n - 1))
        if k >= m:
            k += 1
        pairs = [(m, k)]
    else:
        raise ConfigError(f"unknown pairing '{pairing}'")
    if points is None:
        points = [manifold_from_distribution(q) for q in posteriors]
    elif len(points) != n:
        raise ShapeError("one manifold point per posterior is required")
    terms = [
        ops.add(loss_kl(posteriors[m], posteriors[k]),
                phase_distance(points[m], points[k]))
        for m, k in pairs
    ]
    return _mean_scalars(terms)


def _mean_scalars(terms):
    total = terms[0]
    for term in terms[1:]:
        total = ops.add(total, term)
    return ops.scale(total, 1.0 / len(terms))


def total_loss(groups, model, weights, flags, noise_rng, pair_rng=None,
               pairing="random-pair"):
    """Batch objective over a list of GroupSamples.

    Per dancer: encode, reparameterized sample, decode plus trajectory,
    smooth-L1 reconstruction and KL to the group prior (averaged over
    dancers so the objective is N-invariant). Per group: consistency
    over its posteriors. Ablation flags zero out their term; the
    phase-manifold bypass feeds encoder curves straight to the decoder,
    leaving no distributions to regularize, so KL and consistency are
    recorded as zero there.
    """
    if not groups:
        raise ConfigError("total_loss needs a non-empty batch")
    rec_terms, kl_terms, csc_terms = [], [], []
    for group in groups:
        cond = group.conditioning
        if flags.disable_phase_manifold:
            for dancer in group.dancers:
                curves = encoder_latent_curves(model, dancer, cond)
                local = decode_curves(model, curves, cond)
                pred = compose_motion(local, predict_trajectory(model, local))
                rec_terms.append(loss_reconstruction(pred, Tensor(dancer.poses)))
            continue
        prior_dist = prior(model, cond)
        posteriors = []
        for dancer in group.dancers:
            posterior = encode(model, dancer, cond)
            z = sample_phase(posterior, noise_rng.normal(size=(2, posterior.channels)))
            local = decode(model, z, cond)
            pred = compose_motion(local, predict_trajectory(model, local))
            rec_terms.append(loss_reconstruction(pred, Tensor(dancer.poses)))
            kl_terms.append(loss_kl(posterior, prior_dist))
            posteriors.append(posterior)
        if not flags.disable_consistency and len(posteriors) >= 2:
            csc_terms.append(
                loss_consistency(posteriors, pairing=pairing,
                                 rng=pair_rng if pair_rng is not None else noise_rng)
            )

    rec = _mean_scalars(rec_terms)
    kl = _mean_scalars(kl_terms) if kl_terms else Tensor(0.0)
    csc = _mean_scalars(csc_terms) if csc_terms else Tensor(0.0)
    total = ops.add(ops.add(rec, ops.scale(kl, weights.kl)),
                    ops.scale(csc, weights.consistency))
    record = TrainRecord(
        step=-1,
        reconstruction=rec.item(),
        kl=kl.item(),
        consistency=csc.item(),
        total=rec.item() + weights.kl * kl.item()
        + weights.consistency * csc.item(),
    )
    return total, record
