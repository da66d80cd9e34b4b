"""Triple files, binary model files, and the synthetic ring dataset.

Triple files are UTF-8 text with one ``subject<TAB>relation<TAB>object``
line per triple and an optional fourth ``+1``/``-1`` label column.  Blank
lines and lines starting with ``#`` are skipped.

Model files (all integers and floats little-endian)::

    magic      4 bytes   b"KGEM"
    version    uint32    1
    kind       uint8     0 hole-time, 1 hole-spectral, 2 complex
    dim        uint32
    n_ent      uint32
    n_rel      uint32
    names      n_ent + n_rel times (uint32 byte length, UTF-8 bytes)
    payload    entity rows then relation rows, in id order
               hole-time      dim float64 per row
               hole-spectral  dim float64 per row (packed spectrum)
               complex        2*dim float64 per row (re, im interleaved)
"""

import struct
from pathlib import Path

import numpy as np

from .data import TripleSet, Vocab
from .errors import CorruptFileError, DataError
from .scoring import KINDS, ModelParams
from .spectral import pack, unpack

MAGIC = b"KGEM"
VERSION = 1
_HEADER = struct.Struct("<4sIBIII")
_U32 = struct.Struct("<I")
_KIND_CODES = {kind: code for code, kind in enumerate(KINDS)}


# ---------------------------------------------------------------------------
# triple files
# ---------------------------------------------------------------------------


def load_triples(path, entities=None, relations=None, extend=True):
    """Read a triple file.

    Names are assigned ids in order of first appearance, continuing from the
    given vocabularies when they are passed.  With ``extend=False`` a name
    missing from the vocabularies is an error.
    """
    entities = Vocab() if entities is None else entities
    relations = Vocab() if relations is None else relations
    rows = []
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.rstrip("\r\n")
            if not line.strip() or line.startswith("#"):
                continue
            fields = line.split("\t")
            if len(fields) not in (3, 4):
                raise DataError(f"{path}:{lineno}: expected 3 or 4 tab-separated fields, got {len(fields)}")
            s, r, o = fields[:3]
            if not (s and r and o):
                raise DataError(f"{path}:{lineno}: empty name")
            label = 1
            if len(fields) == 4:
                if fields[3].strip() not in ("+1", "-1", "1"):
                    raise DataError(f"{path}:{lineno}: label must be +1 or -1")
                label = -1 if fields[3].strip() == "-1" else 1
            if not extend:
                for name, vocab in ((s, entities), (o, entities), (r, relations)):
                    if name not in vocab:
                        raise DataError(f"{path}:{lineno}: unknown name {name!r}")
            rows.append((relations.add(r), entities.add(s), entities.add(o), label))
    if not rows:
        raise DataError(f"{path}: no triples")
    return TripleSet(entities, relations, np.array(rows, dtype=np.int64))


def save_triples(triples, path):
    ent, rel = triples.entities, triples.relations
    with open(path, "w", encoding="utf-8") as fh:
        for r, s, o, y in triples.examples.tolist():
            line = f"{ent.name(s)}\t{rel.name(r)}\t{ent.name(o)}"
            if y == -1:
                line += "\t-1"
            fh.write(line + "\n")


# ---------------------------------------------------------------------------
# model files
# ---------------------------------------------------------------------------


def _encode_payload(params):
    if params.kind == "hole-time":
        rows = [params.entities, params.relations]
    elif params.kind == "hole-spectral":
        rows = [pack(t) if len(t) else t.real for t in (params.entities, params.relations)]
    else:
        rows = [t.view(np.float64) for t in (params.entities, params.relations)]
    return b"".join(np.ascontiguousarray(r, dtype="<f8").tobytes() for r in rows)


def dumps_model(params):
    """Serialize ``params`` to bytes."""
    parts = [
        _HEADER.pack(
            MAGIC,
            VERSION,
            _KIND_CODES[params.kind],
            params.dim,
            params.n_entities,
            params.n_relations,
        )
    ]
    for name in params.entity_names + params.relation_names:
        raw = name.encode("utf-8")
        parts.append(_U32.pack(len(raw)))
        parts.append(raw)
    parts.append(_encode_payload(params))
    return b"".join(parts)


def loads_model(buf):
    """Decode bytes produced by :func:`dumps_model`."""
    buf = memoryview(buf)
    if len(buf) < _HEADER.size:
        raise CorruptFileError("truncated header", offset=len(buf))
    magic, version, code, dim, n_ent, n_rel = _HEADER.unpack_from(buf, 0)
    if magic != MAGIC:
        raise CorruptFileError(f"bad magic {bytes(magic)!r}", offset=0)
    if version != VERSION:
        raise CorruptFileError(f"unsupported format version {version}", offset=4)
    if code >= len(KINDS):
        raise CorruptFileError(f"unknown model kind code {code}", offset=8)
    if dim < 1:
        raise CorruptFileError("dimension must be >= 1", offset=9)
    kind = KINDS[code]
    pos = _HEADER.size
    names = []
    for _ in range(n_ent + n_rel):
        if pos + 4 > len(buf):
            raise CorruptFileError("truncated vocabulary", offset=pos)
        (length,) = _U32.unpack_from(buf, pos)
        pos += 4
        if pos + length > len(buf):
            raise CorruptFileError("truncated vocabulary", offset=pos)
        try:
            names.append(bytes(buf[pos:pos + length]).decode("utf-8"))
        except UnicodeDecodeError:
            raise CorruptFileError("name is not valid UTF-8", offset=pos) from None
        pos += length
    width = 2 * dim if kind == "complex" else dim
    expected = 8 * width * (n_ent + n_rel)
    if len(buf) - pos < expected:
        raise CorruptFileError(
            f"truncated payload: need {expected} bytes, have {len(buf) - pos}", offset=len(buf)
        )
    if len(buf) - pos > expected:
        raise CorruptFileError("trailing bytes after payload", offset=pos + expected)
    flat = np.frombuffer(buf[pos:], dtype="<f8").astype(np.float64)
    table = flat.reshape(n_ent + n_rel, width)
    if kind == "complex":
        table = table.view(np.complex128)
    elif kind == "hole-spectral":
        table = unpack(table, dim)
    if not np.all(np.isfinite(table)):
        raise CorruptFileError("non-finite embedding values", offset=pos)
    params = ModelParams(kind, table[:n_ent], table[n_ent:], names[:n_ent], names[n_ent:])
    params.check_symmetry()
    return params


def save_model(params, path):
    Path(path).write_bytes(dumps_model(params))


def load_model(path):
    return loads_model(Path(path).read_bytes())


# ---------------------------------------------------------------------------
# synthetic data
# ---------------------------------------------------------------------------


def gen_synthetic(n_entities, seed):
    """Ring-structured toy knowledge graph.

    Entities sit on a ring.  ``next`` links each entity to its successor and
    ``next2`` to the successor's successor.  Every ``next`` triple goes to
    the training split; the ``next2`` triples are shuffled with ``seed`` and
    split 80/10/10 into train/valid/test.

    Returns
    -------
    (train, valid, test) : tuple of TripleSet
        All three share one pair of vocabularies.
    """
    if n_entities < 10:
        raise ValueError("need at least 10 entities")
    width = len(str(n_entities - 1))
    names = [f"e{i:0{width}d}" for i in range(n_entities)]
    entities = Vocab(names)
    relations = Vocab(["next", "next2"])
    idx = np.arange(n_entities)
    nxt = np.stack([np.zeros_like(idx), idx, (idx + 1) % n_entities, np.ones_like(idx)], 1)
    nxt2 = np.stack([np.ones_like(idx), idx, (idx + 2) % n_entities, np.ones_like(idx)], 1)
    nxt2 = nxt2[np.random.default_rng(seed).permutation(n_entities)]
    n_hold = n_entities // 10
    test, valid, train2 = nxt2[:n_hold], nxt2[n_hold:2 * n_hold], nxt2[2 * n_hold:]
    train = np.concatenate([nxt, train2[np.argsort(train2[:, 1], kind="stable")]])
    return (
        TripleSet(entities, relations, train),
        TripleSet(entities, relations, valid[np.argsort(valid[:, 1])]),
        TripleSet(entities, relations, test[np.argsort(test[:, 1])]),
    )
