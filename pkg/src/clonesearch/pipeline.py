"""End-to-end corpus construction from a manifest and a source tree."""

from __future__ import annotations

import logging
from collections import defaultdict
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

from .annotate import AnnotationSet, AnnotationStrategy, annotate_classes
from .dataset import CloneClass, CloneMethodRef, load_manifest, trace
from .docbuild import NaturalLanguageDocument, build_document
from .index import IndexedCorpus, build_index
from .lexnorm import default_stopwords, extract_identifiers

log = logging.getLogger(__name__)


@dataclass
class Corpus:
    classes: list[CloneClass]
    refs: list[CloneMethodRef]
    idents: list[tuple[str, ...]]  # identifier document per doc_id

    def idents_by_class(self) -> dict[int, list[tuple[str, ...]]]:
        out = defaultdict(list)
        for ref in self.refs:
            out[ref.class_id].append(self.idents[ref.doc_id])
        return dict(out)


def _normalize(args) -> tuple[str, ...]:
    ref, root = args
    return tuple(extract_identifiers(trace(ref, root).source))


def load_corpus(manifest, sources, annotations=None, workers: Optional[int] = None) -> Corpus:
    """Trace and normalize every manifest row.

    ``workers > 1`` spreads normalization over processes; results are
    collected in manifest order, so the outcome does not depend on it.
    """
    classes, refs = load_manifest(manifest, annotations)
    jobs = [(r, sources) for r in refs]
    if workers and workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            idents = list(pool.map(_normalize, jobs, chunksize=max(1, len(jobs) // (4 * workers))))
    else:
        idents = [_normalize(j) for j in jobs]
    return Corpus(classes, refs, idents)


def annotate_corpus(corpus: Corpus, strategy: AnnotationStrategy,
                    stopwords: Optional[Iterable[str]] = None) -> dict[int, AnnotationSet]:
    if stopwords is None:
        stopwords = default_stopwords()
    # Only classes that have methods are annotated.
    used = {r.class_id for r in corpus.refs}
    classes = [c for c in corpus.classes if c.class_id in used]
    return annotate_classes(strategy, classes, corpus.idents_by_class(), stopwords)


def build_documents(corpus: Corpus, annotations: dict[int, AnnotationSet]) -> list[NaturalLanguageDocument]:
    return [build_document(annotations[r.class_id], corpus.idents[r.doc_id], r.doc_id) for r in corpus.refs]


def build_corpus_index(corpus: Corpus, strategy: AnnotationStrategy,
                       stopwords: Optional[Iterable[str]] = None) -> IndexedCorpus:
    annotations = annotate_corpus(corpus, strategy, stopwords)
    docs = build_documents(corpus, annotations)
    index = build_index(docs, corpus.refs, strategy)
    for doc_id, reason in index.excluded:
        log.warning("doc %d (%s) excluded: %s", doc_id, corpus.refs[doc_id].path, reason)
    return index


def identifier_queries(corpus: Corpus, index: IndexedCorpus) -> dict[int, Sequence[str]]:
    """Code-to-code query terms (the identifier list) for every indexed method."""
    return {d: corpus.idents[d] for d in index.doc_ids}
