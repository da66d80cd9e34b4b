"""
Circular correlation in the time and frequency domains
======================================================

HolE scores a triple with a circular correlation followed by a dot product.
This walk-through checks the FFT path against direct sums, shows the
conjugate symmetry of real spectra, and packs a spectrum into n floats.
"""

import numpy as np

from holex import spectral as sp

# correlation and convolution by direct sums
x = np.array([1.0, 2.0, 3.0])
y = np.array([4.0, 5.0, 6.0])
print("x * y (convolution) :", sp.circular_convolve_naive(x, y))
print("x . y (correlation) :", sp.circular_correlate_naive(x, y))

# the same through the DFT: correlation becomes conj(X) * Y
print("via FFT             :", sp.circular_correlate_fft(x, y).round(12))

# correlation is convolution with the index-negated vector
print("flip vs circular_flip:", sp.flip(x), sp.circular_flip(x))
print("conv(circular_flip(x), y):", sp.circular_convolve_naive(sp.circular_flip(x), y))

# spectra of real vectors mirror themselves: X[j] = conj(X[-j])
rng = np.random.default_rng(0)
v = rng.normal(size=8)
V = sp.dft(v)
print("spectrum of a real vector:\n", V.round(3))
print("symmetric:", sp.is_conjugate_symmetric(V))

# so n real numbers are enough to store it
packed = sp.pack(V)
print("packed length:", len(packed), "for n =", len(v))
print("unpack(pack(V)) == V:", np.allclose(sp.unpack(packed, 8), V))

# Parseval: time-domain dot products are frequency dot products over n
w = rng.normal(size=8)
print("x.y =", float(v @ w), " F(x).F(y)/n =", float(sp.complex_dot(V, sp.dft(w)).real / 8))
