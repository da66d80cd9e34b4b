"""Holographic and complex knowledge-graph embeddings.

Spectral (frequency-domain) training of HolE, ComplEx, and the conversion
that turns any ComplEx model into a HolE model with proportional scores.
"""

from .data import TripleSet, Vocab
from .equivalence import (
    EquivalenceReport,
    complex_to_hole_vec,
    convert_model,
    lift,
    spectral_as_complex,
    theoretical_ratio,
    verify_equivalence,
)
from .errors import (
    CorruptFileError,
    DataError,
    DimensionError,
    DivergenceError,
    HolexError,
    InconclusiveError,
    SymmetryError,
)
from .evaluation import EvalResult, evaluate, rank_entity
from .io import gen_synthetic, load_model, load_triples, save_model, save_triples
from .scoring import (
    ModelParams,
    grad_complex,
    grad_spectral,
    score_complex,
    score_hole_spectral,
    score_hole_time,
    score_to_probability,
)
from .trainer import TrainConfig, objective, sgd_step, train

__version__ = "0.1.0"
