"""Triple scoring functions, their gradients, and the model container.

Three model kinds share one parameter container:

``hole-time``
    real embeddings, score ``w . (e_s ⋆ e_o)``
``hole-spectral``
    conjugate-symmetric spectra, score ``(1/n) Re(omega . (conj(eps_s) * eps_o))``
``complex``
    unconstrained complex embeddings, score ``Re(w . (conj(e_s) * e_o))``

Vector-level functions broadcast over leading axes, so they accept either a
single triple of length-``n`` vectors or stacks of them.

Complex gradients are returned as ``df/dRe + 1j * df/dIm`` for every
component, so a plain ``v -= lr * g`` is gradient descent on the real and
imaginary parts taken as independent coordinates.
"""

from dataclasses import dataclass

import numpy as np

from .errors import DimensionError, SymmetryError
from .spectral import (
    DEFAULT_TOL,
    circular_convolve_fft,
    circular_correlate_fft,
    complex_dot,
    is_conjugate_symmetric,
    _check_lengths,
)

KINDS = ("hole-time", "hole-spectral", "complex")


# ---------------------------------------------------------------------------
# vector-level scores
# ---------------------------------------------------------------------------


def score_hole_time(w, e_s, e_o):
    """HolE score ``w . (e_s ⋆ e_o)`` with the correlation done by FFT."""
    w = np.asarray(w, dtype=np.float64)
    _check_lengths(w, np.asarray(e_s), np.asarray(e_o))
    return np.sum(w * circular_correlate_fft(e_s, e_o), axis=-1)


def score_complex(w, e_s, e_o):
    """ComplEx score ``Re(w . (conj(e_s) * e_o))``.

    Equal to the trilinear form ``Re(sum_j w_j e_sj conj(e_oj))``; see
    :func:`score_complex_trilinear`.
    """
    w = np.asarray(w, dtype=np.complex128)
    e_s = np.asarray(e_s, dtype=np.complex128)
    e_o = np.asarray(e_o, dtype=np.complex128)
    _check_lengths(w, e_s, e_o)
    # real part of the full complex dot product, expanded into real
    # contractions so no complex temporaries are allocated
    a, b, c, d, e, f = w.real, w.imag, e_s.real, e_s.imag, e_o.real, e_o.imag
    sub = "...j,...j,...j->..."
    out = (
        np.einsum(sub, a, c, e)
        - np.einsum(sub, b, d, e)
        + np.einsum(sub, a, d, f)
        + np.einsum(sub, b, c, f)
    )
    return out if out.ndim else float(out)


def score_complex_trilinear(w, e_s, e_o):
    """ComplEx score written as ``Re(sum_j w_j * e_sj * conj(e_oj))``."""
    w = np.asarray(w, dtype=np.complex128)
    e_s = np.asarray(e_s, dtype=np.complex128)
    e_o = np.asarray(e_o, dtype=np.complex128)
    _check_lengths(w, e_s, e_o)
    return np.sum(w * e_s * np.conj(e_o), axis=-1).real


def score_hole_spectral(omega, eps_s, eps_o, strict=False, tol=DEFAULT_TOL):
    """HolE score computed directly from frequency-domain embeddings.

    This is :func:`score_complex` divided by ``n``.  With ``strict=True`` the
    three inputs are checked for conjugate symmetry and the discarded
    imaginary part of the dot product is checked to be negligible.
    """
    omega = np.asarray(omega, dtype=np.complex128)
    n = _check_lengths(omega, np.asarray(eps_s), np.asarray(eps_o))
    if strict:
        for name, v in (("omega", omega), ("eps_s", eps_s), ("eps_o", eps_o)):
            if not is_conjugate_symmetric(v, tol):
                raise SymmetryError(f"{name} is not conjugate symmetric")
        raw = complex_dot(omega, np.conj(eps_s) * np.asarray(eps_o))
        if np.any(np.abs(raw.imag) > tol * (1.0 + np.abs(raw.real))):
            raise SymmetryError("spectral dot product has a non-negligible imaginary part")
    return score_complex(omega, eps_s, eps_o) / n


def score_to_probability(f):
    """Logistic sigmoid, stable for large ``|f|``."""
    f = np.asarray(f, dtype=np.float64)
    out = np.exp(-np.logaddexp(0.0, -f))
    return out if out.ndim else float(out)


# ---------------------------------------------------------------------------
# gradients
# ---------------------------------------------------------------------------


def grad_complex(w, e_s, e_o):
    """Gradients of :func:`score_complex` w.r.t. ``w``, ``e_s``, ``e_o``."""
    w = np.asarray(w, dtype=np.complex128)
    e_s = np.asarray(e_s, dtype=np.complex128)
    e_o = np.asarray(e_o, dtype=np.complex128)
    _check_lengths(w, e_s, e_o)
    return np.conj(e_s) * e_o, np.conj(w) * e_o, w * e_s


def grad_spectral(omega, eps_s, eps_o):
    """Gradients of :func:`score_hole_spectral`, including its ``1/n``.

    Each output is conjugate symmetric whenever all three inputs are.
    """
    n = np.shape(omega)[-1]
    g_w, g_s, g_o = grad_complex(omega, eps_s, eps_o)
    return g_w / n, g_s / n, g_o / n


def grad_hole_time(w, e_s, e_o):
    """Time-domain gradients of :func:`score_hole_time`.

    Uses ``w.(e_s⋆e_o) = e_s.(w⋆e_o) = e_o.(w∗e_s)``.  Reference path only;
    training moves through the frequency domain.
    """
    return (
        circular_correlate_fft(e_s, e_o),
        circular_correlate_fft(w, e_o),
        circular_convolve_fft(w, e_s),
    )


# ---------------------------------------------------------------------------
# model container
# ---------------------------------------------------------------------------


@dataclass(eq=False)
class ModelParams:
    """Entity and relation embeddings for one model kind.

    Row ``i`` of ``entities`` (``relations``) embeds the entity (relation)
    with id ``i``.  ``hole-time`` stores float64 rows; the other kinds store
    complex128 rows.
    """

    kind: str
    entities: np.ndarray
    relations: np.ndarray
    entity_names: list
    relation_names: list

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown model kind {self.kind!r}")
        dtype = np.float64 if self.kind == "hole-time" else np.complex128
        self.entities = np.ascontiguousarray(self.entities, dtype=dtype)
        self.relations = np.ascontiguousarray(self.relations, dtype=dtype)
        self.entity_names = list(self.entity_names)
        self.relation_names = list(self.relation_names)
        if self.entities.ndim != 2 or self.relations.ndim != 2:
            raise DimensionError("embedding tables must be 2-D")
        if self.entities.shape[1] != self.relations.shape[1] or self.entities.shape[1] < 1:
            raise DimensionError("entity and relation embeddings differ in dimension")
        if len(self.entity_names) != len(self.entities):
            raise DimensionError("entity vocabulary and embedding count differ")
        if len(self.relation_names) != len(self.relations):
            raise DimensionError("relation vocabulary and embedding count differ")

    @property
    def dim(self):
        return self.entities.shape[1]

    @property
    def n_entities(self):
        return self.entities.shape[0]

    @property
    def n_relations(self):
        return self.relations.shape[0]

    def copy(self):
        return ModelParams(
            self.kind,
            self.entities.copy(),
            self.relations.copy(),
            self.entity_names,
            self.relation_names,
        )

    def check_symmetry(self, tol=DEFAULT_TOL):
        """Raise :class:`SymmetryError` if a spectral model lost symmetry."""
        if self.kind != "hole-spectral":
            return
        for table in (self.entities, self.relations):
            if len(table) and not is_conjugate_symmetric(table, tol):
                raise SymmetryError("hole-spectral parameters are not conjugate symmetric")

    def is_finite(self):
        return bool(np.all(np.isfinite(self.entities)) and np.all(np.isfinite(self.relations)))

    def __eq__(self, other):
        if not isinstance(other, ModelParams):
            return NotImplemented
        return (
            self.kind == other.kind
            and self.entity_names == other.entity_names
            and self.relation_names == other.relation_names
            and np.array_equal(self.entities, other.entities)
            and np.array_equal(self.relations, other.relations)
        )

    def __repr__(self):
        return (
            f"ModelParams(kind={self.kind!r}, dim={self.dim}, "
            f"entities={self.n_entities}, relations={self.n_relations})"
        )


def score_triples(params, rel, subj, obj):
    """Score arrays of ``(rel, subj, obj)`` ids under ``params``."""
    w = params.relations[rel]
    e_s = params.entities[subj]
    e_o = params.entities[obj]
    if params.kind == "hole-time":
        return score_hole_time(w, e_s, e_o)
    if params.kind == "hole-spectral":
        return score_hole_spectral(w, e_s, e_o)
    return score_complex(w, e_s, e_o)


def score_objects(params, rel, subj):
    """Scores of ``(rel, subj, o)`` for every entity ``o``."""
    w = params.relations[rel]
    e_s = params.entities[subj]
    if params.kind == "hole-time":
        # w.(e_s ⋆ e_o) == e_o.(w ∗ e_s)
        return params.entities @ circular_convolve_fft(w, e_s)
    out = (params.entities @ np.conj(w * e_s)).real
    return out / params.dim if params.kind == "hole-spectral" else out


def score_subjects(params, rel, obj):
    """Scores of ``(rel, s, obj)`` for every entity ``s``."""
    w = params.relations[rel]
    e_o = params.entities[obj]
    if params.kind == "hole-time":
        # w.(e_s ⋆ e_o) == e_s.(w ⋆ e_o)
        return params.entities @ circular_correlate_fft(w, e_o)
    out = (np.conj(params.entities) @ (np.conj(w) * e_o)).real
    return out / params.dim if params.kind == "hole-spectral" else out
