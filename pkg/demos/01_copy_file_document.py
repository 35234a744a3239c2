"""From a Java method to a searchable document.

Walks one copyFile method through lexing, identifier splitting, stemming
and annotation, then shows the weighted vector the index stores for it.

    python demos/01_copy_file_document.py
"""

# %%
from pathlib import Path

from clonesearch.annotate import AnnotationStrategy
from clonesearch.lexnorm import extract_identifiers, lex_java, split_identifier
from clonesearch.pipeline import annotate_corpus, build_corpus_index, build_documents, load_corpus

FIXTURE = Path(__file__).parents[1] / "tests" / "fixtures" / "table2"
corpus = load_corpus(FIXTURE / "manifest.tsv", FIXTURE / "src", FIXTURE / "annotations.tsv")
source = "\n".join((FIXTURE / "src" / "FileUtil.java").read_text().splitlines()[6:15])
print(source)

# %% Only identifier tokens survive; keywords, literals and comments are dropped.
names = [t.text for t in lex_java(source) if t.kind == "identifier"]
print(names)
print({n: split_identifier(n) for n in ("FileInputStream", "channelSrc", "transferTo")})

# %% Splitting, stemming and dedup give the identifier keywords.
print(" ".join(extract_identifiers(source)))

# %% The manual strategy prepends the stemmed class description.
for kind in ("baseline", "manual"):
    docs = build_documents(corpus, annotate_corpus(corpus, AnnotationStrategy(kind)))
    print(f"{kind:9s}", " ".join(docs[0].terms))

# %% With a single document every idf is ln(1/1) = 0, so the stored row is empty.
index = build_corpus_index(corpus, AnnotationStrategy("manual"))
print("J =", index.J, "vocabulary =", len(index.vocabulary), "nonzeros =", index.matrix().nnz)
