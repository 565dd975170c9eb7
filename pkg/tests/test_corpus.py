import numpy as np
import pytest

from relweights.core import IndexSet
from relweights.corpus import (
    EmptyCorpus,
    EmptyVocabulary,
    TokenizerConfig,
    build_bundle,
    frequency_weight,
    project,
    support_report,
    tokenize,
)
from relweights.weights import supporting_weight

ONE = TokenizerConfig(min_token_length=1)


@pytest.mark.parametrize(
    "text, config, expected",
    [
        ("The cat. The hat!", TokenizerConfig(), ["the", "cat", "the", "hat"]),
        ("a b", TokenizerConfig(min_token_length=2), []),
        ("X1 x1", TokenizerConfig(), ["x1", "x1"]),
        ("", TokenizerConfig(), []),
        ("snake_case CamelCase", TokenizerConfig(lowercase=False), ["snake", "case", "CamelCase"]),
        ("Über straße", TokenizerConfig(), ["über", "straße"]),
        ("the cat sat", TokenizerConfig(stopwords=frozenset({"The"})), ["cat", "sat"]),
    ],
)
def test_tokenize(text, config, expected):
    assert tokenize(text, config) == expected


def test_tokenizer_config_validation():
    with pytest.raises(ValueError):
        TokenizerConfig(min_token_length=0)
    cfg = TokenizerConfig(stopwords=frozenset({"a", "b"}))
    assert TokenizerConfig.from_dict(cfg.to_dict()) == cfg


def test_build_bundle_counts():
    b = build_bundle("c", [("d1", "a a b"), ("d2", "b c")], ONE)
    assert b.vocabulary == IndexSet(["a", "b", "c"])
    assert b.doc_ids == ("d1", "d2")
    np.testing.assert_array_equal(b.functions.matrix, [[2, 1, 0], [0, 1, 1]])


def test_single_doc_bundle():
    b = build_bundle("c", [("d", "a a")], ONE)
    np.testing.assert_array_equal(b.functions.matrix, [[2]])


def test_bundle_errors():
    with pytest.raises(EmptyCorpus):
        build_bundle("c", [])
    with pytest.raises(EmptyVocabulary):
        build_bundle("c", [("d", "a b ! ?")])


def test_bundle_has_no_zero_columns():
    b = build_bundle("c", [("d1", "alpha beta"), ("d2", "gamma"), ("d3", "")])
    assert np.all(b.functions.matrix.sum(axis=0) > 0)


def test_frequency_weight():
    b = build_bundle("c", [("d1", "a a b"), ("d2", "b c")], ONE)
    np.testing.assert_allclose(frequency_weight(b).values, [0.4, 0.4, 0.2], atol=1e-15)
    assert list(frequency_weight(build_bundle("c", [("d", "a")], ONE)).values) == [1.0]
    uniform = build_bundle("u", [("d1", "a b"), ("d2", "c d")], ONE)
    np.testing.assert_allclose(frequency_weight(uniform).values, [0.25] * 4)


def test_frequency_weight_invariant_under_doc_order():
    docs = [("d1", "x y y z"), ("d2", "z z w"), ("d3", "x w v")]
    a = frequency_weight(build_bundle("c", docs, ONE))
    b = frequency_weight(build_bundle("c", docs[::-1], ONE))
    np.testing.assert_array_equal(a.values, b.values)


def test_project():
    vocab = IndexSet(["cat", "hat"])
    f, dropped = project({"cat": 2, "dog": 1}, vocab)
    assert list(f.values) == [2.0, 0.0] and dropped == 1.0
    f, dropped = project({}, vocab)
    assert list(f.values) == [0.0, 0.0] and dropped == 0.0


def test_project_round_trip_and_idempotence():
    b = build_bundle("c", [("d1", "a a b"), ("d2", "b c")], ONE)
    bag = {"a": 2, "b": 1}
    f, _ = project(bag, b.vocabulary)
    np.testing.assert_array_equal(f.values, b.functions.matrix[0])
    g, dropped = project(f.as_dict(nonzero_only=True), b.vocabulary)
    np.testing.assert_array_equal(f.values, g.values)
    assert dropped == 0.0


def test_example2_like_corpus():
    docs = [(f"d{i}", f"shared own{i}") for i in range(4)]
    b = build_bundle("c", docs)
    w = supporting_weight(b.functions)
    assert w.alpha == pytest.approx(1.0)
    rep = support_report(w, b)
    assert rep.support_size == 1 and rep.top_terms == [("shared", 1.0)]
    assert rep.support_fraction == pytest.approx(1 / 5)


def test_example2_fixture_support(ex2_3):
    from relweights.corpus import CorpusBundle

    b = CorpusBundle("ex2", ex2_3.domain, ex2_3)
    rep = support_report(supporting_weight(ex2_3), b)
    assert rep.support_size == 1 and rep.support_fraction == pytest.approx(1 / 3)


def _synthetic_corpus(n_docs, n_terms, seed):
    rng = np.random.default_rng(seed)
    terms = [f"t{j:05d}" for j in range(n_terms)]
    docs = []
    for i in range(n_docs):
        idx = rng.choice(n_terms, size=int(rng.integers(30, 120)), replace=True)
        docs.append((f"doc{i:03d}", " ".join(terms[j] for j in idx)))
    # make sure every term occurs somewhere
    docs.append(("doc_all", " ".join(terms)))
    return docs


def test_support_bounded_by_documents():
    for seed in range(5):
        b = build_bundle("s", _synthetic_corpus(10, 300, seed))
        w = supporting_weight(b.functions)
        rep = support_report(w, b)
        assert rep.support_size <= len(b.doc_ids)
        weights = [t[1] for t in rep.top_terms]
        assert weights == sorted(weights, reverse=True)
