from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

from .annotate import AnnotationSet


@dataclass(frozen=True)
class NaturalLanguageDocument:
    doc_id: int
    class_id: Optional[int]
    terms: tuple[str, ...]


def build_document(annotation: AnnotationSet, idents: Sequence[str], doc_id: int = 0) -> NaturalLanguageDocument:
    """Annotation words first, then identifier words not already present."""
    terms = tuple(dict.fromkeys((*annotation.words, *idents)))
    return NaturalLanguageDocument(doc_id, annotation.class_id, terms)
