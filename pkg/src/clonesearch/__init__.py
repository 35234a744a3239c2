"""Clone method search over TF-IDF indexed natural language documents.

Each clone method is reduced to a flat list of stemmed identifier keywords,
optionally prefixed with words describing its clone class, and indexed with
TF-IDF. Queries are either Java code or English prose.
"""

from .annotate import AnnotationSet, AnnotationStrategy, annotate_automatic, annotate_manual
from .dataset import CloneClass, CloneMethodRef, RawMethod, load_manifest, trace
from .docbuild import NaturalLanguageDocument, build_document
from .evaluation import (
    ClonePairLabel,
    EvalReport,
    NLQueryCase,
    bucket_type,
    eval_nlq,
    eval_recall,
    mrr,
    precision_at_k,
)
from .index import IndexedCorpus, build_index, load_index, save_index, tfidf_weight, vectorize
from .lexnorm import default_stopwords, extract_identifiers, extract_words, lex_java, split_identifier
from .pipeline import Corpus, build_corpus_index, identifier_queries, load_corpus
from .search import Query, SearchResult, prepare_query, search
from .stemmer import stem

__version__ = "0.1.0"
