"""Timing of HolE scoring in the time domain (FFT) and frequency domain."""

import time

import numpy as np

from .scoring import score_hole_spectral, score_hole_time
from .trainer import init_real, init_spectral


def bench(dims=(64, 256, 1024, 4096), reps=20, batch=64, seed=0):
    """Time one batched scoring call per repetition for each dimension.

    Returns a list of dicts with keys ``dim``, ``model``, ``mean_sec`` and
    ``median_sec``.  No pass/fail judgement is made here.
    """
    rng = np.random.default_rng(seed)
    cases = []
    for n in dims:
        w, e_s, e_o = (init_real(n, rng, count=batch) for _ in range(3))
        om, ep_s, ep_o = (init_spectral(n, rng, count=batch) for _ in range(3))
        cases.append((n, "hole-time", lambda a=(w, e_s, e_o): score_hole_time(*a)))
        cases.append((n, "hole-spectral", lambda a=(om, ep_s, ep_o): score_hole_spectral(*a)))
    for _, _, fn in cases:
        fn()
    # round-robin over cases so drifting machine load hits every case alike
    times = [[] for _ in cases]
    for _ in range(reps):
        for slot, (_, _, fn) in zip(times, cases):
            t0 = time.perf_counter()
            fn()
            slot.append(time.perf_counter() - t0)
    return [
        {
            "dim": n,
            "model": model,
            "mean_sec": float(np.mean(t)),
            "median_sec": float(np.median(t)),
        }
        for (n, model, _), t in zip(cases, times)
    ]


def scaling_ratio(records, model, lo, hi, stat="mean_sec"):
    """``time(hi) / time(lo)`` for one model."""
    by_dim = {r["dim"]: r[stat] for r in records if r["model"] == model}
    return by_dim[hi] / by_dim[lo]
