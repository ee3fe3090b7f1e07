"""One dense vector per document.

Two providers:

* ``hash_embed`` — a self-contained signed feature-hashing embedder. Word
  unigrams and bigrams of the clean text are hashed (BLAKE2b keyed with the
  seed, stable across processes and platforms) into ``dim`` buckets with a
  +/-1 sign drawn from an independent digest bit, then L2-normalized. The
  signed trick makes the expected dot product of unrelated texts zero.
* ``import_embeddings`` — replay vectors produced by any external model.

File formats:

* JSON lines: ``{"id": str, "vector": [float, ...]}`` per line (lossless for
  float64; serialize/import round-trips bit-exactly).
* Packed binary: magic ``EMB1``, u32 n, u32 dim (little-endian), n*dim f32
  values, then an id table of length-prefixed (u32) UTF-8 strings. Compact
  but f32-lossy.
"""

from __future__ import annotations

import hashlib
import json
import logging
import math
import struct
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .concurrency import parallel_map
from .corpus import Corpus
from .errors import DimensionMismatch, InvalidValue, MissingEmbedding
from .textutils import basic_tokens

log = logging.getLogger(__name__)

_MAGIC = b"EMB1"


@dataclass
class EmbeddingMatrix:
    doc_ids: list[str]
    data: np.ndarray  # (n_docs, dim) float64, row-aligned to doc_ids

    @property
    def dim(self) -> int:
        return self.data.shape[1]

    def __len__(self) -> int:
        return self.data.shape[0]


def _hash_row(text: str, dim: int, key: bytes) -> np.ndarray | None:
    tokens = basic_tokens(text)
    if not tokens:
        return None
    feats = tokens + [f"{a} {b}" for a, b in zip(tokens, tokens[1:])]
    row = np.zeros(dim, dtype=np.float64)
    for feat in feats:
        digest = hashlib.blake2b(feat.encode("utf-8"), digest_size=9, key=key).digest()
        bucket = int.from_bytes(digest[:8], "little") % dim
        sign = 1.0 if digest[8] & 1 else -1.0
        row[bucket] += sign
    norm = math.sqrt(float(row @ row))
    if norm == 0.0:  # all features cancelled; astronomically unlikely
        return None
    return row / norm


def hash_embed(corpus: Corpus, dim: int = 256, seed: int = 0, threads: int = 1) -> EmbeddingMatrix:
    """Deterministic hashing embedder; a pure function of (text, dim, seed).

    Documents with zero tokens are dropped with a warning, so the returned
    doc_ids may be a subset of the corpus — callers re-align with
    ``corpus.subset(matrix.doc_ids)``.
    """
    if dim < 8:
        raise ValueError("dim must be >= 8")
    if not len(corpus):
        raise ValueError("corpus is empty")
    key = (seed & 0xFFFFFFFFFFFFFFFF).to_bytes(8, "little")
    rows = parallel_map(lambda rec: _hash_row(rec.clean_text, dim, key), corpus.records, threads)
    ids, kept = [], []
    dropped = 0
    for rec, row in zip(corpus.records, rows):
        if row is None:
            dropped += 1
            continue
        ids.append(rec.id)
        kept.append(row)
    if dropped:
        log.warning("dropped %d document(s) with no tokens", dropped)
    if not kept:
        raise ValueError("no document produced any token")
    return EmbeddingMatrix(ids, np.vstack(kept))


def save_embeddings(matrix: EmbeddingMatrix, path, fmt: str = "jsonl") -> None:
    if fmt == "jsonl":
        with open(path, "w", encoding="utf-8") as fh:
            for doc_id, row in zip(matrix.doc_ids, matrix.data):
                fh.write(json.dumps({"id": doc_id, "vector": [float(v) for v in row]}))
                fh.write("\n")
    elif fmt == "binary":
        n, dim = matrix.data.shape
        with open(path, "wb") as fh:
            fh.write(_MAGIC)
            fh.write(struct.pack("<II", n, dim))
            fh.write(matrix.data.astype("<f4").tobytes())
            for doc_id in matrix.doc_ids:
                raw = doc_id.encode("utf-8")
                fh.write(struct.pack("<I", len(raw)))
                fh.write(raw)
    else:
        raise ValueError(f"unknown embedding format {fmt!r}")


def _read_jsonl(path) -> tuple[list[str], list[np.ndarray]]:
    ids, rows = [], []
    dim = None
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.strip()
            if not line:
                continue
            obj = json.loads(line)
            vec = np.asarray(obj["vector"], dtype=np.float64)
            if vec.ndim != 1:
                raise InvalidValue(f"line {lineno}: vector is not one-dimensional")
            if dim is None:
                dim = vec.shape[0]
            elif vec.shape[0] != dim:
                raise DimensionMismatch(
                    f"line {lineno}: vector of length {vec.shape[0]} among length-{dim} rows")
            if not np.all(np.isfinite(vec)):
                raise InvalidValue(f"line {lineno}: non-finite value")
            ids.append(obj["id"])
            rows.append(vec)
    return ids, rows


def _read_binary(path) -> tuple[list[str], list[np.ndarray]]:
    blob = Path(path).read_bytes()
    n, dim = struct.unpack_from("<II", blob, 4)
    off = 12
    data = np.frombuffer(blob, dtype="<f4", count=n * dim, offset=off).astype(np.float64)
    data = data.reshape(n, dim)
    off += n * dim * 4
    ids = []
    for _ in range(n):
        (length,) = struct.unpack_from("<I", blob, off)
        off += 4
        ids.append(blob[off:off + length].decode("utf-8"))
        off += length
    if not np.all(np.isfinite(data)):
        raise InvalidValue("non-finite value in binary embedding file")
    return ids, [data[i] for i in range(n)]


def import_embeddings(path, corpus: Corpus) -> EmbeddingMatrix:
    """Load an embedding file and reorder rows to corpus order.

    Rows for ids not in the corpus are ignored; a corpus id without a row
    raises MissingEmbedding.
    """
    with open(path, "rb") as fh:
        magic = fh.read(4)
    ids, rows = _read_binary(path) if magic == _MAGIC else _read_jsonl(path)
    by_id = dict(zip(ids, rows))
    ordered = []
    for doc_id in corpus.ids():
        if doc_id not in by_id:
            raise MissingEmbedding(doc_id)
        ordered.append(by_id[doc_id])
    if not ordered:
        raise InvalidValue("embedding file contains no rows")
    return EmbeddingMatrix(corpus.ids(), np.vstack(ordered))
