"""Shared test helpers."""

import numpy as np

from phasedance.diffmath import no_grad, zero_grads


def model_gradcheck(model, evaluate, picked, coords_per_tensor=4, eps=1e-5, seed=5):
    """Finite-difference check of selected model parameters.

    `evaluate` rebuilds the loss graph from the model's current
    parameters (with all randomness internally fixed); `picked` names
    entries of model.named_params(). Returns the worst relative error
    over the sampled coordinates.
    """
    names = model.named_params()
    zero_grads(model.param_list())
    loss = evaluate()
    loss.backward()
    analytic = {
        n: (names[n].grad.copy() if names[n].grad is not None
            else np.zeros_like(names[n].data))
        for n in picked
    }
    zero_grads(model.param_list())

    rng = np.random.default_rng(seed)
    worst = 0.0
    for name in picked:
        flat = names[name].data.reshape(-1)
        count = min(coords_per_tensor, flat.size)
        for j in rng.choice(flat.size, size=count, replace=False):
            original = flat[j]
            flat[j] = original + eps
            with no_grad():
                upper = evaluate().item()
            flat[j] = original - eps
            with no_grad():
                lower = evaluate().item()
            flat[j] = original
            g_fd = (upper - lower) / (2.0 * eps)
            g_ad = float(analytic[name].reshape(-1)[j])
            err = abs(g_ad - g_fd) / max(1.0, abs(g_ad), abs(g_fd))
            worst = max(worst, err)
    return worst
