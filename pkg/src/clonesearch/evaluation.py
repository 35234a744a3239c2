"""Retrieval quality measures.

* pair recall per clone type for code-to-code search,
* Precision@k and mean reciprocal rank for natural-language queries.
"""

from __future__ import annotations

import csv
import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Mapping, Optional, Sequence, TextIO

from .index import IndexedCorpus
from .search import EVAL_TOP_K, TEXT, prepare_query, search

log = logging.getLogger(__name__)

CLONE_TYPES = ("T1", "T2", "VST3", "ST3", "MT3", "WT3_4")
BUCKETED = ("VST3", "ST3", "MT3", "WT3_4")
DEFAULT_K_VALUES = (1, 5, 10)


class EvalError(ValueError):
    pass


def bucket_type(similarity: float) -> str:
    """Clone type of a Type-3/4 pair from its syntactic similarity in [0, 1)."""
    if not 0.0 <= similarity < 1.0:
        raise EvalError(f"similarity {similarity} outside [0, 1)")
    if similarity >= 0.9:
        return "VST3"
    if similarity >= 0.7:
        return "ST3"
    if similarity >= 0.5:
        return "MT3"
    return "WT3_4"


def _normalize_type(name: str) -> str:
    t = name.strip().upper().replace("/", "_")
    if t == "WT3_T4":
        t = "WT3_4"
    if t not in CLONE_TYPES:
        raise EvalError(f"unknown clone type {name!r}")
    return t


@dataclass(frozen=True)
class ClonePairLabel:
    doc_a: int
    doc_b: int
    ptype: str
    similarity: Optional[float] = None

    def __post_init__(self):
        object.__setattr__(self, "ptype", _normalize_type(self.ptype))
        if self.doc_a == self.doc_b:
            raise EvalError(f"self pair ({self.doc_a}, {self.doc_b})")
        if self.similarity is not None:
            if not 0.0 <= self.similarity <= 1.0:
                raise EvalError(f"similarity {self.similarity} outside [0, 1]")
            if self.ptype in BUCKETED and bucket_type(self.similarity) != self.ptype:
                raise EvalError(
                    f"pair ({self.doc_a}, {self.doc_b}) labeled {self.ptype} but similarity "
                    f"{self.similarity} falls in {bucket_type(self.similarity)}"
                )

    @property
    def key(self) -> frozenset:
        return frozenset((self.doc_a, self.doc_b))


@dataclass(frozen=True)
class NLQueryCase:
    query_id: str
    class_id: int
    text: str


@dataclass
class RecallReport:
    found: dict[str, int] = field(default_factory=dict)
    total: dict[str, int] = field(default_factory=dict)
    missed_excluded: list[ClonePairLabel] = field(default_factory=list)

    def recall(self, ptype: str) -> float:
        return self.found[ptype] / self.total[ptype]

    @property
    def types(self) -> list[str]:
        return [t for t in CLONE_TYPES if self.total.get(t)]

    def as_dict(self) -> dict[str, float]:
        return {t: self.recall(t) for t in self.types}


@dataclass(frozen=True)
class QueryRow:
    query_id: str
    rr: float
    precision: Mapping[int, float]


@dataclass
class EvalReport:
    k_values: tuple[int, ...]
    rows: list[QueryRow]

    @property
    def mrr(self) -> float:
        return sum(r.rr for r in self.rows) / len(self.rows)

    def precision_at(self, k: int) -> float:
        return sum(r.precision[k] for r in self.rows) / len(self.rows)


# -- file formats --------------------------------------------------------------

def _data_lines(path):
    for lineno, line in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), 1):
        if line.strip() and not line.lstrip().startswith("#"):
            yield lineno, line


def load_pairs(path) -> list[ClonePairLabel]:
    pairs = []
    for lineno, line in _data_lines(path):
        parts = line.split("\t")
        try:
            if len(parts) not in (3, 4):
                raise EvalError("expected doc_a<TAB>doc_b<TAB>ptype[<TAB>similarity]")
            sim = float(parts[3]) if len(parts) == 4 and parts[3].strip() else None
            pairs.append(ClonePairLabel(int(parts[0]), int(parts[1]), parts[2], sim))
        except (EvalError, ValueError) as e:
            raise EvalError(f"{path}:{lineno}: {e}") from None
    return pairs


def load_queries(path) -> list[NLQueryCase]:
    cases = []
    for lineno, line in _data_lines(path):
        parts = line.split("\t", 2)
        if len(parts) != 3:
            raise EvalError(f"{path}:{lineno}: expected query_id<TAB>class_id<TAB>text")
        try:
            cases.append(NLQueryCase(parts[0].strip(), int(parts[1]), parts[2].strip()))
        except ValueError:
            raise EvalError(f"{path}:{lineno}: class_id is not an integer") from None
    return cases


# -- code-to-code recall -------------------------------------------------------

def check_pairs(index: IndexedCorpus, pairs: Iterable[ClonePairLabel]) -> None:
    for p in pairs:
        for d in (p.doc_a, p.doc_b):
            if d not in index.refs:
                raise EvalError(f"pair ({p.doc_a}, {p.doc_b}) references unknown doc {d}")


def retrieved_sets(index: IndexedCorpus, queries: Mapping[int, Sequence[str]],
                   top_k: int = EVAL_TOP_K) -> dict[int, set[int]]:
    """doc_id -> doc_ids in its top_k results, the doc itself removed."""
    out = {}
    for doc_id, terms in queries.items():
        out[doc_id] = {r.doc_id for r in search(index, terms, top_k)} - {doc_id}
    return out


def eval_recall(index: IndexedCorpus, pairs: Sequence[ClonePairLabel], top_k: int = EVAL_TOP_K,
                queries: Optional[Mapping[int, Sequence[str]]] = None) -> RecallReport:
    """Per-type recall of labeled clone pairs.

    Every indexed method is issued as a query (``queries[doc_id]``, by
    default the method's own stored document) and paired with each of its
    top_k results. A labeled pair counts as found if either member retrieves
    the other. Pairs touching an excluded document are missed.
    """
    check_pairs(index, pairs)
    if queries is None:
        queries = {d: index.doc_terms(d) for d in index.doc_ids}
    found_sets = retrieved_sets(index, queries, top_k)

    report = RecallReport()
    seen = set()
    for p in pairs:
        if (p.key, p.ptype) in seen:
            continue
        seen.add((p.key, p.ptype))
        report.total[p.ptype] = report.total.get(p.ptype, 0) + 1
        report.found.setdefault(p.ptype, 0)
        a, b = p.doc_a, p.doc_b
        if a not in found_sets or b not in found_sets:
            report.missed_excluded.append(p)
            continue
        if b in found_sets[a] or a in found_sets[b]:
            report.found[p.ptype] += 1
    for p in report.missed_excluded:
        log.warning("pair (%d, %d) %s involves an excluded document; counted as missed", p.doc_a, p.doc_b, p.ptype)
    return report


# -- natural-language queries --------------------------------------------------

def _relevance(results: Sequence[int], truth: int) -> list[bool]:
    return [c == truth for c in results]


def reciprocal_rank(results: Sequence[int], truth: int) -> float:
    for rank, rel in enumerate(_relevance(results, truth), start=1):
        if rel:
            return 1.0 / rank
    return 0.0


def precision_at_k(results: Mapping[str, Sequence[int]], truth: Mapping[str, int], k: int) -> float:
    """Mean fraction of relevant results among the top k.

    ``results`` maps a query id to the class ids of its ranked results;
    missing slots in a short list count as non-relevant.
    """
    if k < 1:
        raise EvalError(f"k must be >= 1, got {k}")
    if not results:
        raise EvalError("empty query set")
    return sum(sum(_relevance(r[:k], truth[q])) / k for q, r in results.items()) / len(results)


def mrr(results: Mapping[str, Sequence[int]], truth: Mapping[str, int]) -> float:
    if not results:
        raise EvalError("empty query set")
    return sum(reciprocal_rank(r, truth[q]) for q, r in results.items()) / len(results)


def eval_nlq(index: IndexedCorpus, cases: Sequence[NLQueryCase], stopwords: Optional[Iterable[str]] = None,
             k_values: Sequence[int] = DEFAULT_K_VALUES) -> EvalReport:
    """Run every prose query and score it against its ground-truth clone class."""
    if not cases:
        raise EvalError("empty query set")
    known = {r.class_id for r in index.refs.values()}
    for c in cases:
        if c.class_id not in known:
            raise EvalError(f"query {c.query_id}: unknown class_id {c.class_id}")
    k_values = tuple(sorted(set(k_values)))
    depth = max(k_values)
    rows = []
    for c in cases:
        q = prepare_query(c.text, TEXT, stopwords)
        classes = [r.ref.class_id for r in search(index, q, depth)]
        rows.append(QueryRow(
            c.query_id,
            reciprocal_rank(classes, c.class_id),
            {k: precision_at_k({c.query_id: classes}, {c.query_id: c.class_id}, k) for k in k_values},
        ))
    return EvalReport(k_values, rows)


# -- CSV reports ---------------------------------------------------------------

def _fmt(x: float) -> str:
    return f"{x:.4f}"


def write_recall_csv(report: RecallReport, out: TextIO) -> None:
    w = csv.writer(out, lineterminator="\n")
    w.writerow(["ptype", "found", "total", "recall"])
    for t in report.types:
        w.writerow([t, report.found[t], report.total[t], _fmt(report.recall(t))])


def write_nlq_csv(report: EvalReport, out: TextIO) -> None:
    w = csv.writer(out, lineterminator="\n")
    w.writerow(["query_id", "mrr", *(f"p{k}" for k in report.k_values)])
    for r in report.rows:
        w.writerow([r.query_id, _fmt(r.rr), *(_fmt(r.precision[k]) for k in report.k_values)])
    w.writerow(["average", _fmt(report.mrr), *(_fmt(report.precision_at(k)) for k in report.k_values)])
