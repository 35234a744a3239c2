import io
import math
import random

import pytest
from hypothesis import given, settings, strategies as st

from clonesearch.annotate import AnnotationStrategy
from clonesearch.dataset import CloneMethodRef
from clonesearch.docbuild import NaturalLanguageDocument
from clonesearch.index import build_index
from clonesearch.pipeline import build_corpus_index
from clonesearch.search import CODE, NO_MATCHES, TEXT, Query, prepare_query, search, write_results
from conftest import TABLE2_IDENTS, TABLE2_SOURCE, TABLE5_QUERY, TABLE5_TERMS
import oracles


def make_index(term_lists):
    docs = [NaturalLanguageDocument(i, 1, tuple(t)) for i, t in enumerate(term_lists)]
    refs = [CloneMethodRef(i, 1, f"m{i}.java", i + 1, i + 1) for i in range(len(term_lists))]
    return build_index(docs, refs)


POOL = [f"k{i:02d}" for i in range(15)]


def random_corpus(rng, n_docs=20, max_terms=8):
    return [rng.sample(POOL, rng.randint(1, max_terms)) for _ in range(n_docs)]


class TestPrepare:
    def test_text_query(self):
        q = prepare_query(TABLE5_QUERY, TEXT)
        assert " ".join(q.terms) == TABLE5_TERMS
        assert q.mode == TEXT and q.raw == TABLE5_QUERY

    def test_code_query(self):
        assert " ".join(prepare_query(TABLE2_SOURCE, CODE).terms) == TABLE2_IDENTS

    def test_punctuation_only(self):
        assert prepare_query("???", TEXT).terms == ()

    def test_unknown_mode(self):
        with pytest.raises(ValueError):
            prepare_query("x", "voice")


class TestSearch:
    def test_self_similarity(self):
        lists = random_corpus(random.Random(5))
        idx = make_index(lists)
        for d in (0, 7, 19):
            top = search(idx, lists[d], top_k=1)[0]
            # an identical document would tie; the lower doc id wins
            assert abs(top.score - 1.0) <= 1e-9
            assert top.doc_id == d or sorted(lists[top.doc_id]) == sorted(lists[d])

    def test_no_overlap_is_empty_and_flagged(self):
        res = search(make_index([["a1", "b2"], ["c3"]]), ["zz"])
        assert list(res) == [] and res.flag == NO_MATCHES

    def test_empty_query(self):
        res = search(make_index([["a1"], ["b2"]]), Query(TEXT, "???", ()))
        assert list(res) == [] and res.flag == NO_MATCHES

    def test_zero_scores_are_not_padding(self):
        res = search(make_index([["a1", "b2"], ["c3"], ["d4"]]), ["a1"], top_k=10)
        assert [r.doc_id for r in res] == [0]

    def test_bad_top_k(self):
        with pytest.raises(ValueError):
            search(make_index([["a1"]]), ["a1"], top_k=0)

    def test_ties_break_by_doc_id(self):
        idx = make_index([["x1", "c3"], ["a1", "b2"], ["a1", "b2"], ["q9"]])
        assert [r.doc_id for r in search(idx, ["a1", "b2"])] == [1, 2]

    def test_matches_dense_oracle_on_random_corpora(self):
        rng = random.Random(2024)
        for _ in range(40):
            lists = random_corpus(rng)
            idx = make_index(lists)
            query = rng.sample(POOL, 5)
            expected = oracles.full_ranking(lists, range(len(lists)), query)[:10]
            got = search(idx, query, top_k=10)
            assert [r.doc_id for r in got] == [d for d, _ in expected]
            for r, (_, s) in zip(got, expected):
                assert abs(r.score - s) <= 1e-9

    def test_ranks_and_refs(self):
        lists = random_corpus(random.Random(8))
        idx = make_index(lists)
        res = search(idx, POOL[:4])
        assert [r.rank for r in res] == list(range(1, len(res) + 1))
        assert all(r.ref == idx.refs[r.doc_id] for r in res)


corpora = st.lists(st.lists(st.sampled_from(POOL), min_size=1, max_size=8, unique=True), min_size=1, max_size=20)
queries = st.lists(st.sampled_from(POOL + ["zz"]), max_size=6)


class TestProperties:
    @given(corpora, queries, st.randoms())
    def test_scores_bounded_monotone_and_order_free(self, lists, query, rnd):
        idx = make_index(lists)
        res = search(idx, query, top_k=30)
        scores = [r.score for r in res]
        assert all(0 < s <= 1 for s in scores)
        assert scores == sorted(scores, reverse=True)
        shuffled = list(query)
        rnd.shuffle(shuffled)
        again = search(idx, shuffled, top_k=30)
        assert [r.doc_id for r in again] == [r.doc_id for r in res]
        assert all(abs(a.score - b.score) <= 1e-11 for a, b in zip(again, res))

    @given(corpora, queries, st.integers(1, 25), st.integers(0, 10))
    def test_prefix_property(self, lists, query, k, extra):
        idx = make_index(lists)
        assert search(idx, query, top_k=k) == search(idx, query, top_k=k + extra)[:k]

    @settings(max_examples=50)
    @given(corpora, queries, st.randoms())
    def test_corpus_order_invariance(self, lists, query, rnd):
        perm = list(range(len(lists)))
        rnd.shuffle(perm)
        a = make_index(lists)
        b = make_index([lists[p] for p in perm])
        ra = search(a, query, top_k=30)
        rb = search(b, query, top_k=30)
        # compare (original document, score) multisets; orders may differ only within ties
        assert sorted((d.doc_id, round(d.score, 9)) for d in ra) == \
            sorted((perm[d.doc_id], round(d.score, 9)) for d in rb)
        if len({round(r.score, 9) for r in ra}) == len(ra):
            assert [r.doc_id for r in ra] == [perm[r.doc_id] for r in rb]


def test_reflection_query_finds_the_three_methods(table5_corpus):
    idx = build_corpus_index(table5_corpus, AnnotationStrategy("manual"))
    top = search(idx, prepare_query(TABLE5_QUERY), top_k=3)
    assert {r.doc_id for r in top} == {0, 1, 2}
    assert all(r.ref.class_id == 35 for r in top)


def test_tsv_emission():
    idx = make_index([["a1", "b2"], ["b2", "c3"], ["d4"]])
    buf = io.StringIO()
    write_results(search(idx, ["a1"]), buf)
    cos = math.log(3) / math.hypot(math.log(3), math.log(1.5))
    assert buf.getvalue() == f"1\t{cos:.6f}\t1\tm0.java\t1\t1\n" == "1\t0.938145\t1\tm0.java\t1\t1\n"


def test_scores_within_a_rounding_tie_are_reported_equal():
    # raw cosines here differ in the last bit; ranking treats them as tied
    lists = [["k00"]] * 5 + [["k01"], ["k00", "k01", "k02", "k03"], ["k00", "k01", "k03", "k04"]]
    scores = [r.score for r in search(make_index(lists), ["k00"], top_k=10)]
    assert scores == sorted(scores, reverse=True)
    assert scores[5] == scores[6]
