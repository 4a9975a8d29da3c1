#!/usr/bin/env python3
"""Compare the compiled kernel backend against the numpy fallback.

Times each fused kernel on attention-sized operands, then a short
end-to-end training-step loop under each backend. Run after an editable
install:

    python3 benchmarks/bench_kernels.py
"""

import argparse
import time

import numpy as np

from phasedance.kernels import _numpy_backend

try:
    from phasedance.kernels import _ckernels
except ImportError:
    _ckernels = None


def _time(fn, repeats):
    best = float("inf")
    for _ in range(repeats):
        start = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - start)
    return best


def kernel_cases(rng):
    scores = rng.normal(size=(4, 64, 64))          # attention logits
    grads = rng.normal(size=(4, 64, 64))
    hidden = rng.normal(size=(64, 256))            # feed-forward activations
    hidden_g = rng.normal(size=(64, 256))
    diff = rng.normal(size=(64, 291)) * 2          # pose residuals
    params = rng.normal(size=50_000)
    pgrad = rng.normal(size=50_000)

    def adam_case(backend):
        p = params.copy()
        m = np.zeros_like(p)
        v = np.zeros_like(p)
        return lambda: backend.adam_update(p, pgrad, m, v, 1, 1e-4, 0.9, 0.999, 1e-8)

    def layernorm_grad_case(backend):
        y, rstd = backend.layernorm_lastdim(hidden, 1e-5)
        return lambda: backend.layernorm_lastdim_grad(y, rstd, hidden_g)

    def softmax_grad_case(backend):
        y = backend.softmax_lastdim(scores)
        return lambda: backend.softmax_lastdim_grad(y, grads)

    return [
        ("softmax fwd (4x64x64)", lambda b: lambda: b.softmax_lastdim(scores)),
        ("softmax bwd (4x64x64)", softmax_grad_case),
        ("layernorm fwd (64x256)", lambda b: lambda: b.layernorm_lastdim(hidden, 1e-5)),
        ("layernorm bwd (64x256)", layernorm_grad_case),
        ("smooth-l1 fwd (64x291)", lambda b: lambda: b.smooth_l1_mean(diff)),
        ("smooth-l1 bwd (64x291)",
         lambda b: lambda: b.smooth_l1_mean_grad(diff, 1.0)),
        ("adam step (50k params)", adam_case),
    ]


def bench_kernels(repeats):
    rng = np.random.default_rng(0)
    rows = []
    for name, make in kernel_cases(rng):
        t_np = _time(make(_numpy_backend), repeats)
        t_c = _time(make(_ckernels), repeats) if _ckernels else float("nan")
        rows.append((name, t_np, t_c))
    return rows


def bench_train_steps(steps):
    """End-to-end steps under the currently selected backend."""
    from phasedance.motion import SynthConfig, synth_group_dataset
    from phasedance.networks import ModelConfig, PhaseDanceModel
    from phasedance.training import TrainConfig, fit

    synth = SynthConfig(groups=2, dancers=2, frames=64, skeleton="smpl24")
    dataset = synth_group_dataset(synth, seed=0)
    config = ModelConfig(cond_dim=synth.conditioning_dim, pose_dim=291, window=64)
    model = PhaseDanceModel(config, seed=0)
    start = time.perf_counter()
    fit(dataset, model, TrainConfig(steps=steps, learning_rate=1e-4, seed=0))
    return (time.perf_counter() - start) / steps


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--repeats", type=int, default=200)
    parser.add_argument("--train-steps", type=int, default=15,
                        help="end-to-end steps timed under the active backend")
    args = parser.parse_args()

    import phasedance.kernels as kernels

    print(f"active backend: {kernels.BACKEND_NAME}")
    print(f"{'kernel':<26} {'numpy':>12} {'cython':>12} {'speedup':>9}")
    for name, t_np, t_c in bench_kernels(args.repeats):
        speedup = t_np / t_c if t_c == t_c and t_c > 0 else float("nan")
        print(f"{name:<26} {t_np * 1e6:>10.1f}us {t_c * 1e6:>10.1f}us "
              f"{speedup:>8.2f}x")
    if args.train_steps > 0:
        per_step = bench_train_steps(args.train_steps)
        print(f"\ntraining step ({kernels.BACKEND_NAME} backend): "
              f"{per_step * 1e3:.1f} ms/step")
        print("re-run with PHASEDANCE_KERNELS=numpy to time the fallback "
              "end to end")


if __name__ == "__main__":
    main()
