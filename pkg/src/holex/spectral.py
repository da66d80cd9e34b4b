"""Real/complex vector algebra shared by every scoring model.

All transforms act along the last axis, so a ``(m, n)`` array is treated as
``m`` independent length-``n`` vectors.

Normalization convention
------------------------
The forward DFT is unnormalized and the inverse carries the ``1/n``::

    dft(x)[j]  = sum_k x[k] * exp(-2j*pi*j*k/n)
    idft(z)[j] = (1/n) * sum_k z[k] * exp(+2j*pi*j*k/n)

With this choice the time/frequency dot-product identity reads
``x . y == (1/n) * complex_dot(dft(x), dft(y))`` and every constant elsewhere
in the package (the ``1/n`` of the spectral score, the ``2/(2n+1)`` of the
ComplEx-to-HolE conversion) follows from it.

Power-of-two lengths use an iterative radix-2 FFT.  Other lengths use a
direct ``O(n^2)`` DFT when small and Bluestein's chirp-z algorithm (built on
the same radix-2 kernel) otherwise.
"""

from functools import lru_cache

import numpy as np

from .errors import DimensionError, SymmetryError

#: Hybrid tolerance used by symmetry checks: ``tol * (1 + max|z|)``.
DEFAULT_TOL = 1e-9

# Non-power-of-two lengths up to this size use the direct DFT.
_DIRECT_MAX = 64

__all__ = [
    "DEFAULT_TOL",
    "circular_convolve_naive",
    "circular_correlate_naive",
    "circular_convolve_fft",
    "circular_correlate_fft",
    "flip",
    "circular_flip",
    "dft",
    "idft",
    "idft_real",
    "dft_naive",
    "idft_naive",
    "elementwise_product",
    "complex_dot",
    "is_conjugate_symmetric",
    "symmetry_deviation",
    "pack",
    "unpack",
]


def _check_lengths(*arrays):
    n = arrays[0].shape[-1]
    if n < 1:
        raise DimensionError("vectors must have length >= 1")
    for a in arrays[1:]:
        if a.shape[-1] != n:
            raise DimensionError(
                f"length mismatch: {arrays[0].shape[-1]} vs {a.shape[-1]}"
            )
    return n


def _is_pow2(n):
    return n > 0 and (n & (n - 1)) == 0


# ---------------------------------------------------------------------------
# time-domain primitives
# ---------------------------------------------------------------------------


def flip(x):
    """Reverse the components of ``x``: ``[x_{n-1}, ..., x_0]``."""
    return np.asarray(x)[..., ::-1].copy()


def circular_flip(x):
    """Negate indices modulo n: ``[x_0, x_{n-1}, ..., x_1]``.

    This is the reversal under which correlation becomes convolution
    (``x ⋆ y == circular_flip(x) ∗ y``) and whose DFT is ``conj(dft(x))``.
    Plain :func:`flip` differs from it by a one-step rotation.
    """
    x = np.asarray(x)
    n = x.shape[-1]
    return x[..., (-np.arange(n)) % n]


@lru_cache(maxsize=64)
def _conv_index(n):
    j = np.arange(n)
    return (j[:, None] - j[None, :]) % n


@lru_cache(maxsize=64)
def _corr_index(n):
    # built directly, not as a transposed view, so the gathered products
    # are laid out (and summed) exactly like the convolution's
    j = np.arange(n)
    return (j[None, :] - j[:, None]) % n


def circular_convolve_naive(x, y):
    """Circular convolution by the defining double sum, ``O(n^2)``.

    ``out[j] = sum_k x[(j - k) mod n] * y[k]``
    """
    x = np.asarray(x)
    y = np.asarray(y)
    n = _check_lengths(x, y)
    return (x[..., _conv_index(n)] * y[..., None, :]).sum(axis=-1)


def circular_correlate_naive(x, y):
    """Circular correlation by the defining double sum, ``O(n^2)``.

    ``out[j] = sum_k x[(k - j) mod n] * y[k]``
    """
    x = np.asarray(x)
    y = np.asarray(y)
    n = _check_lengths(x, y)
    return (x[..., _corr_index(n)] * y[..., None, :]).sum(axis=-1)


# ---------------------------------------------------------------------------
# transforms
# ---------------------------------------------------------------------------


@lru_cache(maxsize=64)
def _bit_reverse(n):
    bits = n.bit_length() - 1
    idx = np.arange(n)
    rev = np.zeros(n, dtype=np.intp)
    for b in range(bits):
        rev |= ((idx >> b) & 1) << (bits - 1 - b)
    return rev


@lru_cache(maxsize=64)
def _twiddles(m):
    return np.exp(-2j * np.pi * np.arange(m // 2) / m)


def _fft_pow2(x):
    """Iterative radix-2 decimation-in-time FFT along the last axis."""
    n = x.shape[-1]
    if n == 1:
        return x.astype(np.complex128, copy=True)
    lead = x.shape[:-1]
    x = x[..., _bit_reverse(n)].astype(np.complex128, copy=False)
    m = 2
    while m <= n:
        half = m // 2
        blocks = x.reshape(lead + (n // m, m))
        u = blocks[..., :half]
        t = blocks[..., half:] * _twiddles(m)
        x = np.concatenate([u + t, u - t], axis=-1).reshape(lead + (n,))
        m <<= 1
    return x


@lru_cache(maxsize=64)
def _dft_matrix(n):
    jk = np.outer(np.arange(n), np.arange(n)) % n
    return np.exp(-2j * np.pi * jk / n)


@lru_cache(maxsize=64)
def _bluestein_plan(n):
    # k^2 mod 2n keeps the chirp phase small for large k
    k = np.arange(n)
    chirp = np.exp(-1j * np.pi * ((k * k) % (2 * n)) / n)
    m = 1 << (2 * n - 2).bit_length()
    b = np.zeros(m, dtype=np.complex128)
    b[:n] = np.conj(chirp)
    b[m - n + 1:] = np.conj(chirp[1:])[::-1]
    return chirp, m, _fft_pow2(b)


def _bluestein(x):
    n = x.shape[-1]
    chirp, m, b_hat = _bluestein_plan(n)
    a = np.zeros(x.shape[:-1] + (m,), dtype=np.complex128)
    a[..., :n] = x * chirp
    conv = np.conj(_fft_pow2(np.conj(_fft_pow2(a) * b_hat))) / m
    return conv[..., :n] * chirp


def _forward(x):
    n = x.shape[-1]
    if n < 1:
        raise DimensionError("vectors must have length >= 1")
    if _is_pow2(n):
        return _fft_pow2(x)
    if n <= _DIRECT_MAX:
        return x @ _dft_matrix(n).T
    return _bluestein(x)


def dft(x):
    """Unnormalized forward DFT along the last axis.

    Examples
    --------
    >>> dft([1.0, 2.0, 3.0, 4.0])
    array([10.+0.j, -2.+2.j, -2.+0.j, -2.-2.j])
    """
    return _forward(np.asarray(x, dtype=np.complex128))


def idft(z):
    """Inverse DFT (carries the ``1/n``), complex output."""
    z = np.asarray(z, dtype=np.complex128)
    return np.conj(_forward(np.conj(z))) / z.shape[-1]


def idft_real(z, tol=DEFAULT_TOL):
    """Inverse DFT of a spectrum that must have a real pre-image.

    The imaginary residue of the reconstruction is checked against
    ``tol * (1 + max|z|)`` and then dropped.

    Raises
    ------
    SymmetryError
        If the residue is too large, i.e. ``z`` is not conjugate symmetric.
    """
    z = np.asarray(z, dtype=np.complex128)
    out = idft(z)
    residue = np.max(np.abs(out.imag), axis=-1)
    bound = tol * (1.0 + np.max(np.abs(z), axis=-1))
    if np.any(residue > bound):
        raise SymmetryError(
            f"inverse DFT has imaginary residue {np.max(residue):.3e}; "
            "input spectrum has no real pre-image"
        )
    return out.real.copy()


def dft_naive(x):
    """Direct ``O(n^2)`` DFT, used as an independent oracle."""
    x = np.asarray(x, dtype=np.complex128)
    n = x.shape[-1]
    jk = np.outer(np.arange(n), np.arange(n)) % n
    return x @ np.exp(-2j * np.pi * jk / n).T


def idft_naive(z):
    """Direct ``O(n^2)`` inverse DFT, used as an independent oracle."""
    z = np.asarray(z, dtype=np.complex128)
    n = z.shape[-1]
    jk = np.outer(np.arange(n), np.arange(n)) % n
    return z @ np.exp(2j * np.pi * jk / n).T / n


def circular_convolve_fft(x, y):
    """Circular convolution via ``idft(dft(x) * dft(y))``."""
    x = np.asarray(x, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    _check_lengths(x, y)
    return idft(dft(x) * dft(y)).real


def circular_correlate_fft(x, y):
    """Circular correlation via ``idft(conj(dft(x)) * dft(y))``."""
    x = np.asarray(x, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    _check_lengths(x, y)
    return idft(np.conj(dft(x)) * dft(y)).real


# ---------------------------------------------------------------------------
# frequency-domain primitives
# ---------------------------------------------------------------------------


def elementwise_product(a, b):
    """Componentwise complex product."""
    a = np.asarray(a, dtype=np.complex128)
    b = np.asarray(b, dtype=np.complex128)
    _check_lengths(a, b)
    return a * b


def complex_dot(a, b):
    """Complex inner product ``sum_j conj(a[j]) * b[j]`` (conjugate-linear in ``a``)."""
    a = np.asarray(a, dtype=np.complex128)
    b = np.asarray(b, dtype=np.complex128)
    _check_lengths(a, b)
    return np.sum(np.conj(a) * b, axis=-1)


def symmetry_deviation(z):
    """Largest ``|z[j] - conj(z[-j mod n])|`` scaled by ``1 + max|z|``."""
    z = np.asarray(z, dtype=np.complex128)
    _check_lengths(z)
    dev = np.max(np.abs(z - np.conj(circular_flip(z))), axis=-1)
    return np.max(dev / (1.0 + np.max(np.abs(z), axis=-1)))


def is_conjugate_symmetric(z, tol=DEFAULT_TOL):
    """True iff every vector in ``z`` satisfies ``z[j] == conj(z[-j mod n])``
    to within ``tol * (1 + max|z|)``."""
    return bool(symmetry_deviation(z) <= tol)


def pack(z, tol=DEFAULT_TOL):
    """Store a conjugate-symmetric length-``n`` spectrum in ``n`` floats.

    Layout is ``[z0, Re z1, Im z1, ..., Re z_{h}, Im z_{h}]`` followed by the
    real Nyquist term ``z_{n/2}`` when ``n`` is even.  Only the lower half is
    read; the mirrored half is implied.
    """
    z = np.asarray(z, dtype=np.complex128)
    n = _check_lengths(z)
    if not is_conjugate_symmetric(z, tol):
        raise SymmetryError("cannot pack a spectrum that is not conjugate symmetric")
    half = z[..., 1:(n + 1) // 2]
    parts = [
        z[..., :1].real,
        np.stack([half.real, half.imag], axis=-1).reshape(z.shape[:-1] + (-1,)),
    ]
    if n % 2 == 0 and n > 1:
        parts.append(z[..., n // 2:n // 2 + 1].real)
    return np.concatenate(parts, axis=-1)


def unpack(p, n):
    """Inverse of :func:`pack`; the output is exactly conjugate symmetric."""
    p = np.asarray(p, dtype=np.float64)
    if p.shape[-1] != n:
        raise DimensionError(f"packed vector has length {p.shape[-1]}, expected {n}")
    h = (n - 1) // 2
    z = np.zeros(p.shape[:-1] + (n,), dtype=np.complex128)
    z[..., 0] = p[..., 0]
    pairs = p[..., 1:1 + 2 * h].reshape(p.shape[:-1] + (h, 2))
    half = pairs[..., 0] + 1j * pairs[..., 1]
    z[..., 1:1 + h] = half
    if n % 2 == 0 and n > 1:
        z[..., n // 2] = p[..., n - 1]
    if h:
        z[..., n - h:] = np.conj(half[..., ::-1])
    return z
