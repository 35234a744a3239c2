"""TF-IDF vector space over natural language documents.

Weights follow ``(1 + ln tf) * ln(J / df)``. Document rows are L2-normalized,
so the dot product of a normalized query vector with the weight matrix gives
cosine similarities directly.
"""

from __future__ import annotations

import hashlib
import json
import math
import os
import tempfile
from collections import Counter
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Mapping, Optional, Sequence

import numpy as np
from scipy import sparse

from .annotate import AUTOMATIC, AnnotationStrategy
from .dataset import CloneMethodRef
from .docbuild import NaturalLanguageDocument

FORMAT_VERSION = 1
EMPTY_REASON = "empty after normalization"
NO_OVERLAP = "no vocabulary overlap"
ZERO_WEIGHT = "all query terms occur in every document"


class IndexBuildError(ValueError):
    pass


class IndexFormatError(ValueError):
    """Raised when an index file is malformed, truncated or tampered with."""


def tfidf_weight(tf: int, df: int, J: int, log_base: float = math.e) -> float:
    if tf < 1:
        raise ValueError(f"tf must be >= 1, got {tf}")
    if not 1 <= df <= J:
        raise ValueError(f"document frequency {df} outside 1..{J}")
    if log_base == math.e:
        return (1.0 + math.log(tf)) * math.log(J / df)
    return (1.0 + math.log(tf, log_base)) * math.log(J / df, log_base)


@dataclass(frozen=True)
class Vocabulary:
    terms: tuple[str, ...]
    df: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "_ids", {t: i for i, t in enumerate(self.terms)})

    def __len__(self):
        return len(self.terms)

    def id_of(self, term: str) -> Optional[int]:
        return self._ids.get(term)


@dataclass(frozen=True)
class WeightedVector:
    ids: np.ndarray
    weights: np.ndarray
    flag: Optional[str] = None

    @property
    def is_zero(self) -> bool:
        return not np.any(self.weights)

    def as_dict(self) -> dict[int, float]:
        return {int(i): float(w) for i, w in zip(self.ids, self.weights)}


@dataclass(frozen=True, eq=False)
class IndexedCorpus:
    """An immutable TF-IDF index.

    ``doc_ids[r]`` is the manifest doc id of matrix row ``r`` and
    ``docs[r]`` its sorted term ids. ``refs`` covers every manifest row,
    including the excluded ones.
    """

    vocabulary: Vocabulary
    doc_ids: tuple[int, ...]
    docs: tuple[tuple[int, ...], ...]
    refs: Mapping[int, CloneMethodRef]
    strategy: AnnotationStrategy = field(default_factory=AnnotationStrategy)
    excluded: tuple[tuple[int, str], ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "_matrices", {})
        object.__setattr__(self, "_row_of", {d: r for r, d in enumerate(self.doc_ids)})

    @property
    def J(self) -> int:
        return len(self.docs)

    def row_of(self, doc_id: int) -> Optional[int]:
        return self._row_of.get(doc_id)

    def doc_terms(self, doc_id: int) -> list[str]:
        return [self.vocabulary.terms[i] for i in self.docs[self._row_of[doc_id]]]

    def idf(self, log_base: float = math.e) -> np.ndarray:
        return np.array([tfidf_weight(1, df, self.J, log_base) for df in self.vocabulary.df])

    def matrix(self, log_base: float = math.e) -> sparse.csr_matrix:
        """Row-normalized J x V weight matrix (computed once per log base)."""
        cached = self._matrices.get(log_base)
        if cached is not None:
            return cached
        idf = self.idf(log_base)
        indptr = np.zeros(self.J + 1, dtype=np.int64)
        indptr[1:] = np.cumsum([len(d) for d in self.docs])
        indices = np.fromiter((i for d in self.docs for i in d), dtype=np.int64, count=indptr[-1])
        # every in-document tf is 1, so a document weight is just the idf
        data = idf[indices]
        norms = np.sqrt(np.add.reduceat(data * data, indptr[:-1])) if len(data) else np.zeros(self.J)
        lengths = np.diff(indptr)
        norms = np.where(lengths > 0, norms, 0.0)
        scale = np.divide(1.0, norms, out=np.zeros_like(norms), where=norms > 0)
        data = data * np.repeat(scale, lengths)
        m = sparse.csr_matrix((data, indices, indptr), shape=(self.J, len(self.vocabulary)))
        m.eliminate_zeros()  # ubiquitous terms (df == J) carry no weight
        self._matrices[log_base] = m
        return m

    def __eq__(self, other):
        if not isinstance(other, IndexedCorpus):
            return NotImplemented
        return (
            self.vocabulary == other.vocabulary
            and self.doc_ids == other.doc_ids
            and self.docs == other.docs
            and dict(self.refs) == dict(other.refs)
            and self.strategy == other.strategy
            and self.excluded == other.excluded
        )

    __hash__ = None


def build_index(
    documents: Sequence[NaturalLanguageDocument],
    refs: Sequence[CloneMethodRef] | Mapping[int, CloneMethodRef],
    strategy: AnnotationStrategy = AnnotationStrategy(),
) -> IndexedCorpus:
    if not isinstance(refs, Mapping):
        refs = {r.doc_id: r for r in refs}
    seen = set()
    for d in documents:
        if d.doc_id in seen:
            raise IndexBuildError(f"duplicate doc_id {d.doc_id}")
        if d.doc_id not in refs:
            raise IndexBuildError(f"doc_id {d.doc_id} has no method reference")
        seen.add(d.doc_id)

    ordered = sorted(documents, key=lambda d: d.doc_id)
    kept = [d for d in ordered if d.terms]
    excluded = tuple((d.doc_id, EMPTY_REASON) for d in ordered if not d.terms)
    if not kept:
        raise IndexBuildError("no documents left after normalization")

    df = Counter()
    for d in kept:
        df.update(set(d.terms))
    terms = tuple(sorted(df))
    vocab = Vocabulary(terms, tuple(df[t] for t in terms))
    docs = tuple(tuple(sorted({vocab.id_of(t) for t in d.terms})) for d in kept)
    return IndexedCorpus(
        vocabulary=vocab,
        doc_ids=tuple(d.doc_id for d in kept),
        docs=docs,
        refs=dict(sorted(refs.items())),
        strategy=strategy,
        excluded=excluded,
    )


def vectorize(index: IndexedCorpus, terms: Iterable[str], log_base: float = math.e) -> WeightedVector:
    """Normalized TF-IDF vector of a term list; unknown terms are ignored."""
    tf = Counter(t for t in terms if index.vocabulary.id_of(t) is not None)
    if not tf:
        return WeightedVector(np.empty(0, dtype=np.int64), np.empty(0), NO_OVERLAP)
    ids = np.array(sorted(index.vocabulary.id_of(t) for t in tf), dtype=np.int64)
    J, df = index.J, index.vocabulary.df
    w = np.array([tfidf_weight(tf[index.vocabulary.terms[i]], df[i], J, log_base) for i in ids])
    norm = float(np.sqrt(np.dot(w, w)))
    if norm == 0.0:
        return WeightedVector(ids, w, ZERO_WEIGHT)
    return WeightedVector(ids, w / norm)


# -- persistence -------------------------------------------------------------

def _payload(index: IndexedCorpus) -> dict:
    refs = index.refs
    return {
        "version": FORMAT_VERSION,
        "strategy": index.strategy.kind,
        "k": index.strategy.k if index.strategy.kind == AUTOMATIC else None,
        "J": index.J,
        "vocabulary": [{"term": t, "df": n} for t, n in zip(index.vocabulary.terms, index.vocabulary.df)],
        "docs": [
            {
                "doc_id": d,
                "class_id": refs[d].class_id,
                "path": refs[d].path,
                "start": refs[d].start_line,
                "end": refs[d].end_line,
                "term_ids": list(ids),
            }
            for d, ids in zip(index.doc_ids, index.docs)
        ],
        "excluded": [
            {
                "doc_id": d,
                "class_id": refs[d].class_id,
                "path": refs[d].path,
                "start": refs[d].start_line,
                "end": refs[d].end_line,
                "reason": reason,
            }
            for d, reason in index.excluded
        ],
    }


def _canonical(payload: dict) -> bytes:
    return json.dumps(payload, sort_keys=True, separators=(",", ":"), ensure_ascii=False).encode("utf-8")


def dumps_index(index: IndexedCorpus) -> bytes:
    payload = _payload(index)
    payload["sha256"] = hashlib.sha256(_canonical(payload)).hexdigest()
    return (json.dumps(payload, ensure_ascii=False, indent=1) + "\n").encode("utf-8")


def save_index(index: IndexedCorpus, path) -> None:
    """Write ``index`` atomically: the target is replaced only once fully written."""
    path = Path(path)
    data = dumps_index(index)
    fd, tmp = tempfile.mkstemp(dir=path.parent or ".", prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "wb") as f:
            f.write(data)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def loads_index(data: bytes | str, origin: str = "<index>") -> IndexedCorpus:
    try:
        payload = json.loads(data)
    except (json.JSONDecodeError, UnicodeDecodeError) as e:
        raise IndexFormatError(f"{origin}: not a valid index file ({e})") from None
    if not isinstance(payload, dict):
        raise IndexFormatError(f"{origin}: not a valid index file")
    if payload.get("version") != FORMAT_VERSION:
        raise IndexFormatError(f"{origin}: unsupported index version {payload.get('version')!r}")
    digest = payload.pop("sha256", None)
    if digest != hashlib.sha256(_canonical(payload)).hexdigest():
        raise IndexFormatError(f"{origin}: checksum mismatch")
    try:
        strategy = AnnotationStrategy(payload["strategy"], payload["k"])
        vocab = Vocabulary(
            tuple(v["term"] for v in payload["vocabulary"]),
            tuple(int(v["df"]) for v in payload["vocabulary"]),
        )
        refs = {}
        for row in payload["docs"] + payload["excluded"]:
            refs[row["doc_id"]] = CloneMethodRef(row["doc_id"], row["class_id"], row["path"], row["start"], row["end"])
        index = IndexedCorpus(
            vocabulary=vocab,
            doc_ids=tuple(row["doc_id"] for row in payload["docs"]),
            docs=tuple(tuple(row["term_ids"]) for row in payload["docs"]),
            refs=dict(sorted(refs.items())),
            strategy=strategy,
            excluded=tuple((row["doc_id"], row["reason"]) for row in payload["excluded"]),
        )
    except (KeyError, TypeError, ValueError) as e:
        raise IndexFormatError(f"{origin}: malformed index ({e})") from None
    _check_consistency(index, payload["J"], origin)
    return index


def _check_consistency(index: IndexedCorpus, J: int, origin: str) -> None:
    if J != index.J:
        raise IndexFormatError(f"{origin}: J={J} but {index.J} documents stored")
    if list(index.vocabulary.terms) != sorted(set(index.vocabulary.terms)):
        raise IndexFormatError(f"{origin}: vocabulary not sorted and unique")
    df = Counter()
    V = len(index.vocabulary)
    for ids in index.docs:
        if any(not 0 <= i < V for i in ids) or list(ids) != sorted(set(ids)):
            raise IndexFormatError(f"{origin}: bad term ids in document")
        df.update(ids)
    if tuple(df[i] for i in range(V)) != index.vocabulary.df:
        raise IndexFormatError(f"{origin}: stored df does not match documents")


def load_index(path) -> IndexedCorpus:
    path = Path(path)
    try:
        data = path.read_bytes()
    except OSError as e:
        raise IndexFormatError(f"{path}: cannot read index ({e.strerror})") from None
    return loads_index(data, str(path))
