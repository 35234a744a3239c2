"""Query preparation and cosine-ranked retrieval."""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from typing import Iterable, Optional, Sequence, TextIO

import numpy as np

from .dataset import CloneMethodRef
from .index import IndexedCorpus, vectorize
from .lexnorm import default_stopwords, extract_identifiers, extract_words

log = logging.getLogger(__name__)

CODE = "code"
TEXT = "text"
DEFAULT_TOP_K = 10
EVAL_TOP_K = 900
NO_MATCHES = "no matches"

# Scores closer than this are ties and fall back to doc_id order, so
# floating-point summation order never decides a ranking.
TIE_DECIMALS = 12


@dataclass(frozen=True)
class Query:
    mode: str
    raw: str
    terms: tuple[str, ...]


@dataclass(frozen=True)
class SearchResult:
    rank: int
    doc_id: int
    ref: CloneMethodRef
    score: float


class Ranking(list):
    """List of :class:`SearchResult` with an optional diagnostic ``flag``."""

    flag: Optional[str] = None


def prepare_query(raw: str, mode: str = TEXT, stopwords: Optional[Iterable[str]] = None) -> Query:
    if mode == CODE:
        terms = extract_identifiers(raw)
    elif mode == TEXT:
        terms = extract_words(raw, default_stopwords() if stopwords is None else stopwords)
    else:
        raise ValueError(f"unknown query mode {mode!r}")
    return Query(mode, raw, tuple(terms))


def score_all(index: IndexedCorpus, terms: Iterable[str], log_base: float = math.e) -> np.ndarray:
    """Cosine similarity of the query with every indexed document (matrix row order)."""
    q = vectorize(index, terms, log_base)
    if q.is_zero:
        return np.zeros(index.J)
    m = index.matrix(log_base)[:, q.ids]
    return np.asarray(m @ q.weights).ravel()


def rank_rows(scores: np.ndarray, doc_ids: Sequence[int], top_k: Optional[int] = None) -> np.ndarray:
    """Row positions with positive score, best first, ties by doc id."""
    rows = np.flatnonzero(scores > 0)
    if not len(rows):
        return rows
    keys = np.round(scores[rows], TIE_DECIMALS)
    ids = np.asarray(doc_ids)[rows]
    order = np.lexsort((ids, -keys))
    return rows[order[:top_k] if top_k is not None else order]


def search(index: IndexedCorpus, query: Query | Sequence[str], top_k: int = DEFAULT_TOP_K,
           log_base: float = math.e) -> Ranking:
    if top_k < 1:
        raise ValueError(f"top_k must be >= 1, got {top_k}")
    terms = query.terms if isinstance(query, Query) else query
    scores = score_all(index, terms, log_base)
    out = Ranking()
    for rank, row in enumerate(rank_rows(scores, index.doc_ids, top_k), start=1):
        doc_id = index.doc_ids[row]
        # report the rounded score the ranking used, so reported scores never increase
        score = min(round(float(scores[row]), TIE_DECIMALS), 1.0)
        out.append(SearchResult(rank, doc_id, index.refs[doc_id], score))
    if not out:
        out.flag = NO_MATCHES
    return out


def write_results(results: Iterable[SearchResult], out: TextIO) -> None:
    for r in results:
        ref = r.ref
        out.write(f"{r.rank}\t{r.score:.6f}\t{ref.class_id}\t{ref.path}\t{ref.start_line}\t{ref.end_line}\n")
