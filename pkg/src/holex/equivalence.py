"""Conversions between ComplEx and HolE and a checker for score equality.

A ComplEx vector ``x`` of length ``n`` becomes a real HolE vector of length
``N = 2n + 1`` by embedding it in a conjugate-symmetric spectrum::

    lift(x) = [0, x_0, ..., x_{n-1}, conj(x_{n-1}), ..., conj(x_0)]
    h(x)    = idft(lift(x))           # real because lift(x) is symmetric

Scores of converted models satisfy ``f_HolE = (2 / N) * f_ComplEx``: the
correlation/dot-product identity contributes ``1/N`` and the mirrored half
of the spectrum doubles the real part.
"""

from dataclasses import dataclass

import numpy as np

from .data import TripleSet
from .errors import DimensionError, InconclusiveError
from .scoring import ModelParams, score_triples
from .spectral import (
    circular_correlate_naive,
    idft_naive,
    idft_real,
)

#: Probes whose ComplEx score is at most this in magnitude are not used.
ZERO_GUARD = 1e-12


def lift(x):
    """Conjugate-symmetric length ``2n+1`` spectrum built from ``x``."""
    x = np.asarray(x, dtype=np.complex128)
    if x.shape[-1] < 1:
        raise DimensionError("vectors must have length >= 1")
    zero = np.zeros(x.shape[:-1] + (1,), dtype=np.complex128)
    return np.concatenate([zero, x, np.conj(x[..., ::-1])], axis=-1)


def complex_to_hole_vec(x):
    """Real HolE vector ``idft(lift(x))`` of length ``2n+1``."""
    return idft_real(lift(x))


def theoretical_ratio(n):
    """``f_HolE / f_ComplEx`` after converting an ``n``-dim ComplEx model."""
    return 2.0 / (2 * n + 1)


def convert_model(params):
    """Map every vector of a ComplEx model through :func:`complex_to_hole_vec`."""
    if params.kind != "complex":
        raise ValueError(f"expected a complex model, got {params.kind!r}")
    return ModelParams(
        "hole-time",
        complex_to_hole_vec(params.entities),
        complex_to_hole_vec(params.relations),
        params.entity_names,
        params.relation_names,
    )


def spectral_as_complex(params):
    """Re-tag a spectral HolE model as ComplEx.

    No numbers change.  The ComplEx scores of the result are exactly ``n``
    times the spectral HolE scores of the input.
    """
    if params.kind != "hole-spectral":
        raise ValueError(f"expected a hole-spectral model, got {params.kind!r}")
    return ModelParams(
        "complex",
        params.entities.copy(),
        params.relations.copy(),
        params.entity_names,
        params.relation_names,
    )


def brute_force_ratio(w, e_s, e_o):
    """``f_HolE / f_ComplEx`` for one triple via direct transforms and sums.

    Shares no code with the FFT path, so it can confirm
    :func:`theoretical_ratio` independently.
    """
    w, e_s, e_o = (np.asarray(v, dtype=np.complex128) for v in (w, e_s, e_o))
    f_complex = np.sum(w * e_s * np.conj(e_o)).real
    h_w, h_s, h_o = (idft_naive(lift(v)).real for v in (w, e_s, e_o))
    f_hole = float(np.dot(h_w, circular_correlate_naive(h_s, h_o)))
    return f_hole / f_complex


def random_probes(params, count, seed):
    """``(count, 3)`` array of uniformly random ``(r, s, o)`` ids."""
    rng = np.random.default_rng(seed)
    return np.stack(
        [
            rng.integers(params.n_relations, size=count),
            rng.integers(params.n_entities, size=count),
            rng.integers(params.n_entities, size=count),
        ],
        axis=1,
    )


@dataclass
class EquivalenceReport:
    dim_complex: int
    dim_hole: int
    triples_checked: int
    triples_used: int
    ratio_mean: float
    ratio_max_abs_dev: float
    theoretical_ratio: float
    tol: float
    passed: bool

    def to_text(self):
        verdict = "PASSED" if self.passed else "FAILED"
        return "\n".join(
            [
                f"equivalence check {verdict}",
                f"  complex dim        {self.dim_complex}",
                f"  hole dim           {self.dim_hole}",
                f"  probes checked     {self.triples_checked}",
                f"  probes used        {self.triples_used}",
                f"  ratio mean         {self.ratio_mean:.15g}",
                f"  ratio max abs dev  {self.ratio_max_abs_dev:.3e}",
                f"  theoretical ratio  {self.theoretical_ratio:.15g}",
                f"  tolerance          {self.tol:.1e}",
            ]
        )

    def to_records(self):
        fields = (
            "dim_complex",
            "dim_hole",
            "triples_checked",
            "triples_used",
            "ratio_mean",
            "ratio_max_abs_dev",
            "theoretical_ratio",
            "tol",
        )
        lines = [f"{k}={getattr(self, k)!r}" for k in fields]
        lines.append(f"passed={str(self.passed).lower()}")
        return "\n".join(lines)


def verify_equivalence(m_complex, m_hole, probes, tol=1e-10):
    """Check ``f_HolE(t) / f_ComplEx(t)`` is the same constant for all probes.

    Parameters
    ----------
    m_complex : ModelParams
        ComplEx model of dimension ``n``.
    m_hole : ModelParams
        ``hole-time`` model of dimension ``2n+1`` with the same vocabularies,
        normally ``convert_model(m_complex)``.
    probes : array_like of shape (m, 3) or TripleSet
        ``(r, s, o)`` id triples.
    tol : float
        The check passes when every ratio lies within ``tol * (1 + |mean|)``
        of the mean and the mean lies within ``tol * (1 + c)`` of the
        theoretical constant ``c = 2 / (2n + 1)``.

    Raises
    ------
    InconclusiveError
        If every probe has ``|f_ComplEx| <= 1e-12``.
    """
    if m_complex.kind != "complex" or m_hole.kind != "hole-time":
        raise ValueError("expected a complex model and a hole-time model")
    n = m_complex.dim
    if m_hole.dim != 2 * n + 1:
        raise DimensionError(f"hole model has dim {m_hole.dim}, expected {2 * n + 1}")
    if (m_hole.n_entities, m_hole.n_relations) != (m_complex.n_entities, m_complex.n_relations):
        raise DimensionError("models have different vocabulary sizes")
    if isinstance(probes, TripleSet):
        probes = probes.examples
    probes = np.asarray(probes, dtype=np.int64)
    if probes.ndim != 2 or probes.shape[1] < 3:
        raise ValueError("probes must be an (m, 3) array of (r, s, o) ids")
    probes = probes[:, :3]
    if len(probes) == 0:
        raise ValueError("no probes given")
    r, s, o = probes.T
    f_complex = score_triples(m_complex, r, s, o)
    f_hole = score_triples(m_hole, r, s, o)
    used = np.abs(f_complex) > ZERO_GUARD
    if not np.any(used):
        raise InconclusiveError("every probe has a ComplEx score of zero")
    ratios = f_hole[used] / f_complex[used]
    mean = float(np.mean(ratios))
    dev = float(np.max(np.abs(ratios - mean)))
    expected = theoretical_ratio(n)
    passed = dev <= tol * (1.0 + abs(mean)) and abs(mean - expected) <= tol * (1.0 + expected)
    return EquivalenceReport(
        dim_complex=n,
        dim_hole=m_hole.dim,
        triples_checked=len(probes),
        triples_used=int(np.count_nonzero(used)),
        ratio_mean=mean,
        ratio_max_abs_dev=dev,
        theoretical_ratio=expected,
        tol=tol,
        passed=bool(passed),
    )
