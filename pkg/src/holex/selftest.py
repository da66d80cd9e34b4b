"""Invariant checks runnable from the command line (``holex selftest``).

Each check returns ``(ok, detail)``.  The ``fast`` level uses small sizes and
finishes in seconds; ``full`` widens the sizes and adds a training run on the
synthetic ring dataset.
"""

import time

import numpy as np

from . import spectral as sp
from .equivalence import (
    brute_force_ratio,
    convert_model,
    random_probes,
    theoretical_ratio,
    verify_equivalence,
)
from .evaluation import evaluate
from .io import dumps_model, gen_synthetic, loads_model
from .scoring import (
    grad_complex,
    grad_spectral,
    score_complex,
    score_hole_spectral,
    score_hole_time,
)
from .trainer import DEFAULT_LEARNING_RATES, TrainConfig, init_model, init_spectral, sgd_step, train


def _rel(a, b):
    a, b = np.asarray(a), np.asarray(b)
    return float(np.max(np.abs(a - b)) / max(1.0, float(np.max(np.abs(b)))))


def check_fft_oracle(level, rng):
    sizes = list(range(1, 33)) + [64, 100, 128] if level == "fast" else list(range(1, 65)) + [128, 256, 1000, 1024]
    worst = 0.0
    for n in sizes:
        x, y = rng.normal(size=(2, n))
        worst = max(
            worst,
            _rel(sp.circular_convolve_fft(x, y), sp.circular_convolve_naive(x, y)),
            _rel(sp.circular_correlate_fft(x, y), sp.circular_correlate_naive(x, y)),
            _rel(sp.dft(x), sp.dft_naive(x)),
        )
    return worst <= 1e-12, f"max rel err {worst:.2e}"


def check_parseval(level, rng):
    worst = 0.0
    for n in (3, 4, 128, 1000):
        x, y = rng.normal(size=(2, 50 if level == "fast" else 1000, n))
        dot = np.sum(x * y, axis=-1)
        freq = sp.complex_dot(sp.dft(x), sp.dft(y)) / n
        worst = max(worst, float(np.max(np.abs(dot - freq.real) / (1 + np.abs(dot)))))
    return worst <= 1e-12, f"max err {worst:.2e}"


def check_cross_domain(level, rng):
    worst = 0.0
    for n in (1, 2, 3, 4, 8, 127, 128):
        w, e_s, e_o = rng.normal(size=(3, 100, n))
        t = score_hole_time(w, e_s, e_o)
        f = score_hole_spectral(sp.dft(w), sp.dft(e_s), sp.dft(e_o))
        worst = max(worst, float(np.max(np.abs(t - f) / (1 + np.abs(t)))))
    return worst <= 1e-10, f"max rel err {worst:.2e}"


def check_spectral_is_complex(level, rng):
    n = 16
    om, e_s, e_o = (init_spectral(n, rng, count=200) for _ in range(3))
    gap = float(np.max(np.abs(score_hole_spectral(om, e_s, e_o) - score_complex(om, e_s, e_o) / n)))
    return gap <= 1e-15, f"max gap {gap:.2e}"


def _fd_check(score, grads, n, rng, h=1e-5):
    vecs = [rng.normal(size=n) + 1j * rng.normal(size=n) for _ in range(3)]
    analytic = np.concatenate([np.stack([g.real, g.imag], -1).ravel() for g in grads(*vecs)])
    numeric = []
    for i in range(3):
        for j in range(n):
            for unit in (1.0, 1j):
                plus = [v.copy() for v in vecs]
                minus = [v.copy() for v in vecs]
                plus[i][j] += h * unit
                minus[i][j] -= h * unit
                numeric.append((score(*plus) - score(*minus)) / (2 * h))
    numeric = np.array(numeric)
    return float(np.linalg.norm(analytic - numeric) / np.linalg.norm(analytic))


def check_gradients(level, rng):
    reps = 10 if level == "fast" else 100
    worst = 0.0
    for n in (1, 2, 7, 16):
        for _ in range(reps):
            worst = max(
                worst,
                _fd_check(score_complex, grad_complex, n, rng),
                _fd_check(score_hole_spectral, grad_spectral, n, rng),
            )
    return worst <= 1e-6, f"max rel err {worst:.2e}"


def check_symmetry_preservation(level, rng):
    steps = 200 if level == "fast" else 1000
    n, n_ent, n_rel = 32, 20, 3
    params = init_model("hole-spectral", n, [str(i) for i in range(n_ent)], ["a", "b", "c"], rng)
    cfg = TrainConfig(dim=n, learning_rate=1e-2, lam=1e-3)
    for _ in range(steps):
        row = [[rng.integers(n_rel), rng.integers(n_ent), rng.integers(n_ent), rng.choice([-1, 1])]]
        sgd_step(params, row, cfg)
    dev = max(sp.symmetry_deviation(params.entities), sp.symmetry_deviation(params.relations))
    resid = max(
        float(np.max(np.abs(sp.idft(t).imag))) for t in (params.entities, params.relations)
    )
    return dev <= 1e-9 and resid <= 1e-9, f"sym dev {dev:.2e}, imag residue {resid:.2e}"


def check_equivalence(level, rng):
    dims = (1, 2, 3, 8) if level == "fast" else (1, 2, 3, 8, 16, 64)
    probes = 200 if level == "fast" else 1000
    for n in dims:
        m = init_model("complex", n, [str(i) for i in range(20)], ["r0", "r1"], rng, scale=1.0)
        rep = verify_equivalence(m, convert_model(m), random_probes(m, probes, rng))
        if not rep.passed:
            return False, f"n={n}: dev {rep.ratio_max_abs_dev:.2e}"
    for n in (1, 2, 3):
        w, e_s, e_o = (rng.normal(size=n) + 1j * rng.normal(size=n) for _ in range(3))
        r = brute_force_ratio(w, e_s, e_o)
        if abs(r - theoretical_ratio(n)) > 1e-12:
            return False, f"brute force ratio {r} at n={n}"
    return True, f"dims {dims}"


def check_persistence(level, rng):
    count = 5 if level == "fast" else 100
    for kind in ("hole-time", "hole-spectral", "complex"):
        for _ in range(count):
            m = init_model(kind, int(rng.integers(1, 12)), ["x", "y", "z"], ["r"], rng)
            if loads_model(dumps_model(m)) != m:
                return False, f"{kind} roundtrip mismatch"
    return True, f"{3 * count} models"


def check_eval_transport(level, rng):
    train_set, _, test = gen_synthetic(20, 0)
    m = init_model("complex", 4, train_set.entities.names, train_set.relations.names, rng, scale=1.0)
    a = evaluate(m, test, train_set)
    b = evaluate(convert_model(m), test, train_set)
    return bool(np.array_equal(a.ranks, b.ranks)), f"mrr {a.mrr:.4f} vs {b.mrr:.4f}"


def check_learning(level, rng):
    train_set, valid, test = gen_synthetic(50, 0)
    known = train_set.concat(valid, test)
    parts = []
    ok = True
    for kind, lr in DEFAULT_LEARNING_RATES.items():
        cfg = TrainConfig(dim=16, model_kind=kind, learning_rate=lr, epochs=200, negatives=2)
        mrr = evaluate(train(train_set, cfg).params, test, known).mrr
        ok &= mrr >= 0.45
        parts.append(f"{kind} {mrr:.3f}")
    return ok, ", ".join(parts)


FAST = [
    ("fft-vs-naive", check_fft_oracle),
    ("parseval", check_parseval),
    ("cross-domain-score", check_cross_domain),
    ("spectral-is-complex", check_spectral_is_complex),
    ("gradients", check_gradients),
    ("symmetry-preservation", check_symmetry_preservation),
    ("equivalence", check_equivalence),
    ("persistence", check_persistence),
    ("eval-transport", check_eval_transport),
]
FULL = FAST + [("learning", check_learning)]


def run(level="fast", seed=0, out=print):
    """Run the checks for ``level``; return True when all pass."""
    rng = np.random.default_rng(seed)
    all_ok = True
    for name, check in FAST if level == "fast" else FULL:
        t0 = time.perf_counter()
        try:
            ok, detail = check(level, rng)
        except Exception as exc:  # report and continue with the other checks
            ok, detail = False, f"{type(exc).__name__}: {exc}"
        all_ok &= ok
        out(f"{'PASS' if ok else 'FAIL'} {name} ({detail}) [{time.perf_counter() - t0:.2f}s]")
    return all_ok
