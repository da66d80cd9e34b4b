"""Vocabularies and labeled triple collections."""

from dataclasses import dataclass, field

import numpy as np

from .errors import DataError


class Vocab:
    """Bidirectional name <-> id map; ids follow insertion order."""

    def __init__(self, names=()):
        self._names = []
        self._ids = {}
        for name in names:
            self.add(name)

    def add(self, name):
        idx = self._ids.get(name)
        if idx is None:
            idx = len(self._names)
            self._names.append(name)
            self._ids[name] = idx
        return idx

    def id(self, name):
        try:
            return self._ids[name]
        except KeyError:
            raise KeyError(f"unknown name {name!r}") from None

    def name(self, idx):
        return self._names[idx]

    @property
    def names(self):
        return list(self._names)

    def __contains__(self, name):
        return name in self._ids

    def __len__(self):
        return len(self._names)

    def __iter__(self):
        return iter(self._names)

    def __eq__(self, other):
        return isinstance(other, Vocab) and self._names == other._names

    def __repr__(self):
        return f"Vocab({len(self)} names)"


@dataclass
class TripleSet:
    """Labeled triples ``(relation, subject, object, y)`` with ``y`` in {-1, +1}.

    ``examples`` is an ``(m, 4)`` int64 array with columns
    ``relation, subject, object, label``.
    """

    entities: Vocab
    relations: Vocab
    examples: np.ndarray = field(default_factory=lambda: np.zeros((0, 4), np.int64))

    def __post_init__(self):
        ex = np.asarray(self.examples, dtype=np.int64).reshape(-1, 4)
        self.examples = ex
        if len(ex):
            if ex[:, 0].min() < 0 or ex[:, 0].max() >= len(self.relations):
                raise DataError("relation id out of range")
            ents = ex[:, 1:3]
            if ents.min() < 0 or ents.max() >= len(self.entities):
                raise DataError("entity id out of range")
            if not np.all(np.abs(ex[:, 3]) == 1):
                raise DataError("labels must be +1 or -1")

    @classmethod
    def from_names(cls, rows, entities=None, relations=None):
        """Build from ``(subject, relation, object[, label])`` name tuples.

        Unknown names are appended to the (possibly shared) vocabularies.
        """
        entities = Vocab() if entities is None else entities
        relations = Vocab() if relations is None else relations
        out = []
        for row in rows:
            s, r, o = row[:3]
            y = row[3] if len(row) > 3 else 1
            out.append((relations.add(r), entities.add(s), entities.add(o), y))
        return cls(entities, relations, np.array(out, dtype=np.int64).reshape(-1, 4))

    def __len__(self):
        return len(self.examples)

    @property
    def rel(self):
        return self.examples[:, 0]

    @property
    def subj(self):
        return self.examples[:, 1]

    @property
    def obj(self):
        return self.examples[:, 2]

    @property
    def labels(self):
        return self.examples[:, 3]

    def positives(self):
        return TripleSet(self.entities, self.relations, self.examples[self.labels == 1])

    def known_positive_keys(self):
        """Set of ``(r, s, o)`` tuples labeled +1."""
        pos = self.examples[self.labels == 1]
        return set(map(tuple, pos[:, :3].tolist()))

    def concat(self, *others):
        """Union of example rows; vocabularies must be shared."""
        for other in others:
            if other.entities is not self.entities and other.entities != self.entities:
                raise DataError("cannot concatenate triple sets with different vocabularies")
        rows = np.concatenate([self.examples] + [o.examples for o in others])
        return TripleSet(self.entities, self.relations, rows)
