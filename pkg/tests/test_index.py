import json
import math
import random

import mpmath
import numpy as np
import pytest
from hypothesis import given, strategies as st

from clonesearch.annotate import AnnotationStrategy
from clonesearch.dataset import CloneMethodRef
from clonesearch.docbuild import NaturalLanguageDocument
from clonesearch.index import (
    EMPTY_REASON,
    NO_OVERLAP,
    IndexBuildError,
    IndexFormatError,
    build_index,
    dumps_index,
    load_index,
    save_index,
    tfidf_weight,
    vectorize,
)
from clonesearch.pipeline import build_corpus_index, load_corpus
from conftest import TABLE2_DOCUMENT, desk_paths
import oracles


def corpus(term_lists, class_id=1):
    docs = [NaturalLanguageDocument(i, class_id, tuple(t)) for i, t in enumerate(term_lists)]
    refs = [CloneMethodRef(i, class_id, f"m{i}.java", 1, 1) for i in range(len(term_lists))]
    return docs, refs


def random_docs(rng, n_docs, vocab_size=20, max_terms=12):
    pool = [f"t{i:02d}" for i in range(vocab_size)]
    return [rng.sample(pool, rng.randint(1, max_terms)) for _ in range(n_docs)]


class TestWeight:
    def test_term_in_every_document_has_no_weight(self):
        assert tfidf_weight(1, 7, 7) == 0.0

    def test_values_against_high_precision(self):
        mpmath.mp.dps = 30
        assert abs(tfidf_weight(1, 1, 10) - float(mpmath.log(10))) <= 1e-12
        expected = (1 + mpmath.log(2)) * mpmath.log(4)
        assert abs(tfidf_weight(2, 2, 8) - float(expected)) <= 1e-12
        assert round(tfidf_weight(2, 2, 8), 6) == 2.3472

    @pytest.mark.parametrize("tf, df, J", [(1, 0, 5), (1, 6, 5), (0, 1, 5)])
    def test_out_of_range(self, tf, df, J):
        with pytest.raises(ValueError):
            tfidf_weight(tf, df, J)


class TestBuild:
    def test_toy_vocabulary(self):
        idx = build_index(*corpus([["a1", "b2"], ["b2", "c3"]]))
        assert idx.vocabulary.terms == ("a1", "b2", "c3")
        assert idx.vocabulary.df == (1, 2, 1)
        assert idx.J == 2
        assert idx.docs == ((0, 1), (1, 2))

    def test_df_matches_brute_force(self):
        rng = random.Random(11)
        lists = random_docs(rng, 50, vocab_size=30, max_terms=8)
        idx = build_index(*corpus(lists))
        expected = oracles.df_table(lists)
        assert dict(zip(idx.vocabulary.terms, idx.vocabulary.df)) == expected
        assert all(1 <= d <= idx.J for d in idx.vocabulary.df)
        # recomputing df from the stored documents
        recount = np.bincount([i for d in idx.docs for i in d], minlength=len(idx.vocabulary))
        assert tuple(recount) == idx.vocabulary.df

    def test_empty_documents_excluded_with_reason(self):
        idx = build_index(*corpus([["a1"], [], ["b2"]]))
        assert idx.doc_ids == (0, 2)
        assert idx.excluded == ((1, EMPTY_REASON),)
        assert len(idx.docs) + len(idx.excluded) == 3
        assert 1 in idx.refs

    def test_all_empty_is_an_error(self):
        with pytest.raises(IndexBuildError):
            build_index(*corpus([[], []]))

    def test_duplicate_doc_id(self):
        docs, refs = corpus([["a1"], ["b2"]])
        with pytest.raises(IndexBuildError, match="duplicate"):
            build_index(docs + docs[:1], refs)

    def test_document_order_does_not_matter(self):
        docs, refs = corpus([["a1", "b2"], ["c3"], ["b2", "d4"]])
        assert build_index(docs[::-1], refs) == build_index(docs, refs)


class TestVectorize:
    def test_own_terms_have_unit_norm(self):
        idx = build_index(*corpus([["a1", "b2"], ["b2", "c3"], ["c3", "d4", "e5"]]))
        v = vectorize(idx, idx.doc_terms(2))
        assert math.isclose(np.linalg.norm(v.weights), 1.0, abs_tol=1e-9)

    def test_no_overlap_is_flagged_zero(self):
        idx = build_index(*corpus([["a1", "b2"], ["b2", "c3"]]))
        v = vectorize(idx, ["zz", "yy"])
        assert v.is_zero and v.flag == NO_OVERLAP

    def test_single_term_normalizes_to_one(self):
        idx = build_index(*corpus([["a1", "b2"], ["b2", "c3"], ["d4"]]))
        assert idx.vocabulary.df[idx.vocabulary.id_of("b2")] == 2
        assert vectorize(idx, ["b2"]).as_dict() == {idx.vocabulary.id_of("b2"): 1.0}

    def test_term_frequency_counts(self):
        idx = build_index(*corpus([["a1", "b2"], ["b2", "c3"], ["d4"]]))
        v = vectorize(idx, ["a1", "a1", "d4"]).as_dict()
        ratio = v[idx.vocabulary.id_of("a1")] / v[idx.vocabulary.id_of("d4")]
        assert math.isclose(ratio, 1 + math.log(2))

    def test_ubiquitous_terms_weigh_nothing(self):
        idx = build_index(*corpus([["a1", "b2"], ["a1", "c3"]]))
        assert vectorize(idx, ["a1"]).is_zero
        row = idx.matrix()[0].toarray().ravel()
        assert row[idx.vocabulary.id_of("a1")] == 0.0

    @given(st.lists(st.lists(st.sampled_from([f"w{i}" for i in range(12)]), min_size=1, max_size=6, unique=True),
                    min_size=1, max_size=15),
           st.lists(st.sampled_from([f"w{i}" for i in range(14)]), max_size=8))
    def test_norm_invariant(self, lists, query):
        idx = build_index(*corpus(lists))
        norms = np.sqrt(np.asarray(idx.matrix().multiply(idx.matrix()).sum(axis=1)).ravel())
        for n in norms:
            assert n == 0.0 or abs(n - 1.0) <= 1e-9
        v = vectorize(idx, query)
        assert np.all(v.weights >= 0)
        if not v.is_zero:
            assert abs(np.linalg.norm(v.weights) - 1.0) <= 1e-9

    def test_matrix_matches_dense_oracle(self):
        rng = random.Random(3)
        lists = random_docs(rng, 25)
        idx = build_index(*corpus(lists))
        vocab, _, rows, _ = oracles.dense_vectors(lists)
        assert tuple(vocab) == idx.vocabulary.terms
        np.testing.assert_allclose(idx.matrix().toarray(), np.array(rows), atol=1e-12)


class TestPersistence:
    def table2_index(self):
        docs = [NaturalLanguageDocument(0, 4, tuple(TABLE2_DOCUMENT.split()))]
        return build_index(docs, [CloneMethodRef(0, 4, "FileUtil.java", 7, 15)], AnnotationStrategy("manual"))

    def test_round_trip(self, tmp_path):
        idx = self.table2_index()
        save_index(idx, tmp_path / "i.json")
        back = load_index(tmp_path / "i.json")
        assert back == idx
        assert back.vocabulary.terms == tuple(sorted(TABLE2_DOCUMENT.split()))
        assert back.refs[0] == CloneMethodRef(0, 4, "FileUtil.java", 7, 15)

    def test_round_trip_keeps_exclusions_and_k(self, tmp_path):
        docs, refs = corpus([["a1"], [], ["b2", "a1"]])
        idx = build_index(docs, refs, AnnotationStrategy("automatic", 7))
        save_index(idx, tmp_path / "i.json")
        back = load_index(tmp_path / "i.json")
        assert back == idx and back.strategy.k == 7 and back.excluded == ((1, EMPTY_REASON),)

    def test_schema(self, tmp_path):
        payload = json.loads(dumps_index(self.table2_index()))
        assert list(payload) == ["version", "strategy", "k", "J", "vocabulary", "docs", "excluded", "sha256"]
        assert payload["version"] == 1 and payload["strategy"] == "manual" and payload["k"] is None
        assert payload["docs"][0]["start"] == 7 and payload["docs"][0]["class_id"] == 4

    def test_repeated_builds_are_byte_identical(self):
        assert dumps_index(self.table2_index()) == dumps_index(self.table2_index())

    def test_truncated_file(self, tmp_path):
        data = dumps_index(self.table2_index())
        (tmp_path / "i.json").write_bytes(data[: len(data) // 2])
        with pytest.raises(IndexFormatError, match="not a valid index"):
            load_index(tmp_path / "i.json")

    def test_checksum_mismatch(self, tmp_path):
        payload = json.loads(dumps_index(self.table2_index()))
        payload["vocabulary"][0]["df"] = 2
        (tmp_path / "i.json").write_text(json.dumps(payload))
        with pytest.raises(IndexFormatError, match="checksum"):
            load_index(tmp_path / "i.json")

    def test_version_mismatch(self, tmp_path):
        payload = json.loads(dumps_index(self.table2_index()))
        payload["version"] = 2
        (tmp_path / "i.json").write_text(json.dumps(payload))
        with pytest.raises(IndexFormatError, match="version"):
            load_index(tmp_path / "i.json")

    def test_missing_file(self, tmp_path):
        with pytest.raises(IndexFormatError):
            load_index(tmp_path / "absent.json")

    def test_failed_save_leaves_nothing(self, tmp_path, monkeypatch):
        import clonesearch.index as index_mod

        def boom(*a):
            raise OSError("disk full")

        monkeypatch.setattr(index_mod.os, "replace", boom)
        with pytest.raises(OSError):
            save_index(self.table2_index(), tmp_path / "i.json")
        assert list(tmp_path.iterdir()) == []


def test_parallel_and_serial_builds_are_byte_identical():
    strategy = AnnotationStrategy("automatic", 5)
    serial = build_corpus_index(load_corpus(*desk_paths()), strategy)
    parallel = build_corpus_index(load_corpus(*desk_paths(), workers=3), strategy)
    assert dumps_index(serial) == dumps_index(parallel)
