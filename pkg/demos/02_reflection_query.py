"""Natural-language search over a small annotated corpus.

Eight methods from six clone classes are indexed with their class
descriptions. A prose question about reflection should bring back the
three methods that instantiate objects reflectively.

    python demos/02_reflection_query.py
"""

# %%
import sys
from importlib import resources
from pathlib import Path

from clonesearch.annotate import AnnotationStrategy
from clonesearch.pipeline import build_corpus_index, load_corpus
from clonesearch.search import prepare_query, search, write_results

FIXTURE = Path(__file__).parents[1] / "tests" / "fixtures" / "table5"
descriptions = resources.files("clonesearch") / "data" / "bcb_descriptions.tsv"
corpus = load_corpus(FIXTURE / "manifest.tsv", FIXTURE / "src", str(descriptions))

# %% Prose queries lose stopwords and get stemmed like annotation text.
query = prepare_query("With Java reflection how to instantiate a new object, then call a method on it?")
print(query.terms)

# %% Compare how the two strategies rank the same query.
for kind in ("baseline", "manual"):
    index = build_corpus_index(corpus, AnnotationStrategy(kind))
    print(f"\n== {kind}")
    write_results(search(index, query, top_k=5), sys.stdout)

# %% A code query: the method's own identifier list finds it first with cosine 1.
index = build_corpus_index(corpus, AnnotationStrategy("baseline"))
top = search(index, corpus.idents[4], top_k=1)[0]
print(f"\ncode query for doc 4 -> doc {top.doc_id} score {top.score:.6f}")
