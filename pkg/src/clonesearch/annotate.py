"""Per-clone-class annotation words.

Three strategies: ``baseline`` adds nothing, ``manual`` runs the class
description through word extraction, and ``automatic`` picks the k terms
that recur in the most methods of the class.
"""

from __future__ import annotations

import logging
from collections import Counter
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Optional, Sequence

from .dataset import CloneClass
from .lexnorm import extract_words

log = logging.getLogger(__name__)

BASELINE = "baseline"
MANUAL = "manual"
AUTOMATIC = "automatic"
DEFAULT_K = 10


class AnnotationError(ValueError):
    pass


@dataclass(frozen=True)
class AnnotationStrategy:
    kind: str = BASELINE
    k: Optional[int] = None

    def __post_init__(self):
        if self.kind not in (BASELINE, MANUAL, AUTOMATIC):
            raise AnnotationError(f"unknown annotation strategy {self.kind!r}")
        if self.kind == AUTOMATIC:
            if self.k is None:
                object.__setattr__(self, "k", DEFAULT_K)
            if not isinstance(self.k, int) or self.k < 1:
                raise AnnotationError(f"k must be a positive integer, got {self.k!r}")
        elif self.k is not None:
            raise AnnotationError(f"k only applies to the automatic strategy, not {self.kind}")

    @classmethod
    def parse(cls, name: str, k: Optional[int] = None) -> "AnnotationStrategy":
        kind = AUTOMATIC if name in ("auto", AUTOMATIC) else name
        return cls(kind, k)


@dataclass(frozen=True)
class AnnotationSet:
    class_id: Optional[int]
    words: tuple[str, ...] = field(default_factory=tuple)


def annotate_manual(clone_class: CloneClass, stopwords: Iterable[str]) -> AnnotationSet:
    if not clone_class.description:
        raise AnnotationError(f"class {clone_class.class_id} has no manual annotation")
    return AnnotationSet(clone_class.class_id, tuple(extract_words(clone_class.description, stopwords)))


def keyword_counts(class_docs: Iterable[Sequence[str]]) -> list[tuple[str, int]]:
    """Every term with its occurrence count, ordered by (count desc, term asc)."""
    counts = Counter()
    for doc in class_docs:
        counts.update(doc)
    return sorted(counts.items(), key=lambda kv: (-kv[1], kv[0]))


def annotate_automatic(class_docs: Iterable[Sequence[str]], k: int = DEFAULT_K,
                       class_id: Optional[int] = None) -> AnnotationSet:
    """Top-k most recurrent terms across the documents of one clone class.

    Documents are duplicate-free, so a term's count is the number of the
    class's methods containing it. Ties go to the lexicographically smaller
    term.
    """
    if k < 1:
        raise AnnotationError(f"k must be >= 1, got {k}")
    table = keyword_counts(class_docs)
    if log.isEnabledFor(logging.DEBUG):
        log.debug("class %s keyword counts: %s", class_id, table)
    return AnnotationSet(class_id, tuple(term for term, _ in table[:k]))


def annotate_classes(
    strategy: AnnotationStrategy,
    classes: Sequence[CloneClass],
    idents_by_class: Mapping[int, Sequence[Sequence[str]]],
    stopwords: Iterable[str] = (),
) -> dict[int, AnnotationSet]:
    """Annotation set for every class under ``strategy``.

    ``idents_by_class`` maps a class id to the identifier documents of its
    methods; only the automatic strategy reads it.
    """
    stopwords = frozenset(stopwords)
    out = {}
    for c in classes:
        if strategy.kind == BASELINE:
            out[c.class_id] = AnnotationSet(c.class_id)
        elif strategy.kind == MANUAL:
            out[c.class_id] = annotate_manual(c, stopwords)
        else:
            out[c.class_id] = annotate_automatic(idents_by_class.get(c.class_id, ()), strategy.k, c.class_id)
    return out
