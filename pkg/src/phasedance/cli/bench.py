"""Scalability benchmark: constant working set, single prior pass.

Memory is measured by the tensor allocation counter (live float64
elements), not OS RSS: at desk scale RSS is dominated by allocator
noise. Peak working set excludes the model weights (the pre-run
baseline) and the accumulated outputs (plain numpy arrays, never
counted by the tensor counter). Decoding runs sequentially for a clean
measurement.
"""

from __future__ import annotations

import gc
import time
from dataclasses import dataclass

import numpy as np

from ..diffmath import allocation_stats
from ..errors import ShapeError
from ..networks import generate_group


@dataclass
class MemoryReport:
    dancers: int
    peak_working_elements: int
    output_elements: int
    prior_calls: int
    wall_time_s: float

    def __post_init__(self):
        if self.prior_calls != 1:
            raise ShapeError(
                f"expected exactly one prior invocation, saw {self.prior_calls}"
            )
        if min(self.dancers, self.peak_working_elements,
               self.output_elements) < 0:
            raise ShapeError("memory report counts must be non-negative")

    def to_dict(self):
        return {
            "dancers": self.dancers,
            "peak_working_elements": self.peak_working_elements,
            "peak_working_bytes": 8 * self.peak_working_elements,
            "output_elements": self.output_elements,
            "prior_calls": self.prior_calls,
            "wall_time_s": self.wall_time_s,
        }


def bench_scale(model, cond, dancer_counts, seed):
    """One instrumented generate_group run per dancer count."""
    stats = allocation_stats()
    # warm-up pass so lazily built caches (DFT matrices, positional
    # tables) do not pollute the first measurement
    generate_group(model, cond, dancers=1, seed=seed)
    reports = []
    for n in dancer_counts:
        gc.collect()
        model.prior_calls = 0
        baseline = stats.live_elements
        stats.reset_peak()
        start = time.perf_counter()
        group = generate_group(model, cond, dancers=n, seed=seed)
        wall = time.perf_counter() - start
        outputs = sum(d.poses.size for d in group.dancers)
        reports.append(MemoryReport(
            dancers=n,
            peak_working_elements=stats.peak_elements - baseline,
            output_elements=outputs,
            prior_calls=model.prior_calls,
            wall_time_s=wall,
        ))
        del group
    return reports


def linear_fit_r_squared(xs, ys):
    """R^2 of the least-squares line y = a + b x."""
    xs = np.asarray(xs, dtype=np.float64)
    ys = np.asarray(ys, dtype=np.float64)
    coeffs = np.polyfit(xs, ys, 1)
    predicted = np.polyval(coeffs, xs)
    ss_res = float(np.sum((ys - predicted) ** 2))
    ss_tot = float(np.sum((ys - ys.mean()) ** 2))
    if ss_tot == 0.0:
        return 1.0
    return 1.0 - ss_res / ss_tot
