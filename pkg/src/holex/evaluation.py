"""Link-prediction metrics: MRR and Hits@k, raw or filtered.

Ties are resolved by mean rank: a truth entity tied with ``t`` other
candidates is placed ``ceil(t / 2)`` positions below the strictly better
ones.  A model that scores everything equally therefore ranks at chance.
"""

from collections import defaultdict
from dataclasses import dataclass, field

import numpy as np

from .data import TripleSet
from .scoring import score_objects, score_subjects


@dataclass
class EvalResult:
    mrr: float
    hits_at: dict
    setting: str
    side: str
    num_queries: int
    ranks: np.ndarray = field(repr=False, default=None)

    def to_text(self):
        lines = [
            f"{'setting':<10}{self.setting}",
            f"{'side':<10}{self.side}",
            f"{'queries':<10}{self.num_queries}",
            f"{'MRR':<10}{self.mrr:.6f}",
        ]
        lines += [f"{f'Hits@{k}':<10}{v:.6f}" for k, v in sorted(self.hits_at.items())]
        return "\n".join(lines)

    def to_records(self):
        lines = [
            f"setting={self.setting}",
            f"side={self.side}",
            f"num_queries={self.num_queries}",
            f"mrr={self.mrr!r}",
        ]
        lines += [f"hits@{k}={v!r}" for k, v in sorted(self.hits_at.items())]
        return "\n".join(lines)


class FilterIndex:
    """Known positives indexed by ``(r, s)`` -> objects and ``(r, o)`` -> subjects."""

    def __init__(self, *triple_sets):
        self.objects = defaultdict(set)
        self.subjects = defaultdict(set)
        for ts in triple_sets:
            for r, s, o, y in ts.examples.tolist():
                if y == 1:
                    self.objects[(r, s)].add(o)
                    self.subjects[(r, o)].add(s)


def rank_from_scores(scores, truth, exclude=()):
    """Mean-tie rank of ``scores[truth]`` among the other candidates.

    ``exclude`` lists candidate ids to drop (never the truth itself).
    """
    keep = np.ones(len(scores), dtype=bool)
    keep[list(exclude)] = False
    keep[truth] = False
    target = scores[truth]
    others = scores[keep]
    higher = int(np.count_nonzero(others > target))
    ties = int(np.count_nonzero(others == target))
    return 1 + higher + (ties + 1) // 2


def rank_entity(params, query, truth, filter=None):
    """Rank of ``truth`` in the open slot of ``query``.

    Parameters
    ----------
    query : tuple
        ``(r, s, None)`` to rank objects or ``(r, None, o)`` to rank subjects.
    filter : TripleSet or FilterIndex, optional
        Known positives; other true answers are removed before ranking.
    """
    r, s, o = query
    if (s is None) == (o is None):
        raise ValueError("exactly one of subject/object must be open")
    ids = [i for i in (s, o, truth) if i is not None]
    if min(ids) < 0 or max(ids) >= params.n_entities:
        raise KeyError("entity id out of range")
    if not 0 <= r < params.n_relations:
        raise KeyError("relation id out of range")
    if isinstance(filter, TripleSet):
        filter = FilterIndex(filter)
    if o is None:
        scores = score_objects(params, r, s)
        known = filter.objects.get((r, s), ()) if filter else ()
    else:
        scores = score_subjects(params, r, o)
        known = filter.subjects.get((r, o), ()) if filter else ()
    return rank_from_scores(scores, truth, [k for k in known if k != truth])


def summarize_ranks(ranks, ks, setting, side):
    ranks = np.asarray(ranks, dtype=np.int64)
    return EvalResult(
        mrr=float(np.mean(1.0 / ranks)),
        hits_at={k: float(np.mean(ranks <= k)) for k in sorted(ks)},
        setting=setting,
        side=side,
        num_queries=len(ranks),
        ranks=ranks,
    )


def evaluate(params, test, filter=None, ks=(1, 3, 10), side="both"):
    """MRR and Hits@k over subject- and/or object-side queries of ``test``.

    Parameters
    ----------
    test : TripleSet
        Positive triples to rank.
    filter : TripleSet, FilterIndex or sequence of TripleSet, optional
        Known positives for the filtered setting; ``None`` gives raw ranks.
    side : {"both", "subject", "object"}
        With ``"both"`` each triple yields an object query then a subject
        query, in that order.
    """
    if len(test) == 0:
        raise ValueError("test set is empty")
    if np.any(test.labels != 1):
        raise ValueError("test triples must all be positive")
    if side not in ("both", "subject", "object"):
        raise ValueError(f"bad side {side!r}")
    if isinstance(filter, TripleSet):
        filter = FilterIndex(filter)
    elif filter is not None and not isinstance(filter, FilterIndex):
        filter = FilterIndex(*filter)
    ranks = []
    for r, s, o, _ in test.examples.tolist():
        if side in ("both", "object"):
            ranks.append(rank_entity(params, (r, s, None), o, filter))
        if side in ("both", "subject"):
            ranks.append(rank_entity(params, (r, None, o), s, filter))
    return summarize_ranks(ranks, ks, "filtered" if filter else "raw", side)
