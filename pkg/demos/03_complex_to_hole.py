"""
Turning a ComplEx model into a HolE model
=========================================

An n-dimensional ComplEx vector is embedded in a mirrored spectrum of
length 2n+1 and transformed back to a real vector.  Converted models give
HolE scores that are a fixed positive multiple, 2/(2n+1), of the ComplEx
scores, so every ranking is preserved.
"""

import numpy as np

from holex.equivalence import (
    brute_force_ratio,
    complex_to_hole_vec,
    convert_model,
    lift,
    random_probes,
    theoretical_ratio,
    verify_equivalence,
)
from holex.scoring import score_objects
from holex.trainer import init_model

x = np.array([1 + 2j])
print("lift([1+2j])       :", lift(x))
print("hole vector (n=1)  :", complex_to_hole_vec(x).round(4))

# the constant, confirmed by direct sums for small n
rng = np.random.default_rng(2)
for n in (1, 2, 3):
    vecs = [rng.normal(size=n) + 1j * rng.normal(size=n) for _ in range(3)]
    print(f"n={n}: brute force {brute_force_ratio(*vecs):.12f}, 2/(2n+1) = {theoretical_ratio(n):.12f}")

# a whole model
names = [f"e{i}" for i in range(20)]
m = init_model("complex", 8, names, ["r0", "r1"], rng, scale=1.0)
h = convert_model(m)
report = verify_equivalence(m, h, random_probes(m, 1000, 0))
print(report.to_text())

# rankings agree
print("same object ranking:", np.array_equal(np.argsort(score_objects(m, 0, 3)), np.argsort(score_objects(h, 0, 3))))
