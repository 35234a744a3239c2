"""Measuring the three annotation strategies on a 24-method desk corpus.

Six clone classes with four methods each, 36 labeled clone pairs and 14
prose queries. Prints recall by clone type for code-to-code search and
MRR / Precision@k for the prose queries.

    python demos/03_desk_evaluation.py
"""

# %%
import sys
from pathlib import Path

import numpy as np

from clonesearch.annotate import AnnotationStrategy
from clonesearch.evaluation import eval_nlq, eval_recall, load_pairs, load_queries, write_recall_csv
from clonesearch.pipeline import build_corpus_index, identifier_queries, load_corpus

DESK = Path(__file__).parents[1] / "tests" / "fixtures" / "desk"
corpus = load_corpus(DESK / "manifest.tsv", DESK / "src", DESK / "annotations.tsv")
pairs = load_pairs(DESK / "pairs.tsv")
cases = load_queries(DESK / "queries.tsv")
strategies = {
    "baseline": AnnotationStrategy("baseline"),
    "manual": AnnotationStrategy("manual"),
    "auto k=10": AnnotationStrategy("automatic", 10),
}
indexes = {name: build_corpus_index(corpus, s) for name, s in strategies.items()}

# %% Code-to-code recall. Queries are identifier lists only, so annotation
# helps here only by reshaping the document vectors being matched.
for name, index in indexes.items():
    print(f"\n== recall, {name}, top 3")
    write_recall_csv(eval_recall(index, pairs, 3, identifier_queries(corpus, index)), sys.stdout)

# %% Prose queries: annotation words give the query something to match.
table = np.array([[r.mrr, r.precision_at(1), r.precision_at(5), r.precision_at(10)]
                  for r in (eval_nlq(ix, cases) for ix in indexes.values())])
print("\n               MRR    P@1    P@5   P@10")
for name, row in zip(indexes, table):
    print(f"{name:10s}", "  ".join(f"{v:.3f}" for v in row))

# %% Per-query reciprocal rank under the manual strategy.
for row in eval_nlq(indexes["manual"], cases).rows:
    print(f"{row.query_id:4s} rr={row.rr:.3f} p@5={row.precision[5]:.2f}")
