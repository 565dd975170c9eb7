"""Text documents to function sets over a shared vocabulary.

Tokenization is mechanical: runs of letters and digits are tokens and
everything else separates them. No stemming or lemmatization is done.
"""
from __future__ import annotations

import re
from collections import Counter
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Optional

import numpy as np

from .core import (
    FunctionSet,
    IndexSet,
    NonnegFunction,
    RelweightsError,
    WeightVector,
    normalized_weight,
)
from .weights import NONZERO_TOL, WeightSolution

_TOKEN_RE = re.compile(r"[^\W_]+")


class EmptyCorpus(RelweightsError, ValueError):
    pass


class EmptyVocabulary(RelweightsError, ValueError):
    pass


@dataclass(frozen=True)
class TokenizerConfig:
    lowercase: bool = True
    min_token_length: int = 2
    stopwords: Optional[frozenset] = None

    def __post_init__(self):
        if self.min_token_length < 1:
            raise ValueError("min_token_length must be at least 1")
        if self.stopwords is not None:
            words = (w.lower() for w in self.stopwords) if self.lowercase else self.stopwords
            object.__setattr__(self, "stopwords", frozenset(words))

    def to_dict(self) -> dict:
        return {
            "lowercase": self.lowercase,
            "min_token_length": self.min_token_length,
            "stopwords": sorted(self.stopwords) if self.stopwords else None,
        }

    @classmethod
    def from_dict(cls, d: Mapping) -> "TokenizerConfig":
        stop = d.get("stopwords")
        return cls(
            lowercase=bool(d.get("lowercase", True)),
            min_token_length=int(d.get("min_token_length", 2)),
            stopwords=frozenset(stop) if stop else None,
        )


def tokenize(text: str, config: TokenizerConfig = TokenizerConfig()) -> list[str]:
    tokens = _TOKEN_RE.findall(text)
    if config.lowercase:
        tokens = [t.lower() for t in tokens]
    tokens = [t for t in tokens if len(t) >= config.min_token_length]
    if config.stopwords:
        tokens = [t for t in tokens if t not in config.stopwords]
    return tokens


def bag_of_words(text: str, config: TokenizerConfig = TokenizerConfig()) -> Counter:
    return Counter(tokenize(text, config))


@dataclass(frozen=True)
class CorpusBundle:
    corpus_id: str
    vocabulary: IndexSet
    functions: FunctionSet
    config: TokenizerConfig = field(default_factory=TokenizerConfig)

    @property
    def doc_ids(self) -> tuple[str, ...]:
        return self.functions.members.labels


def build_bundle(
    corpus_id: str,
    docs: Iterable[tuple[str, str]],
    config: TokenizerConfig = TokenizerConfig(),
) -> CorpusBundle:
    """Count terms per document; rows are documents, columns sorted terms.

    Raises
    ------
    EmptyCorpus
        If ``docs`` is empty.
    EmptyVocabulary
        If no token survives filtering in any document.
    """
    docs = list(docs)
    if not docs:
        raise EmptyCorpus(f"corpus {corpus_id!r} has no documents")
    counts = [(doc_id, bag_of_words(text, config)) for doc_id, text in docs]
    vocab = sorted(set().union(*(c.keys() for _, c in counts)))
    if not vocab:
        raise EmptyVocabulary(f"corpus {corpus_id!r} has no tokens after filtering")
    position = {term: j for j, term in enumerate(vocab)}
    matrix = np.zeros((len(counts), len(vocab)))
    for i, (_, c) in enumerate(counts):
        for term, n in c.items():
            matrix[i, position[term]] = n
    domain = IndexSet(vocab)
    fs = FunctionSet(domain, IndexSet(doc_id for doc_id, _ in counts), matrix)
    return CorpusBundle(corpus_id=corpus_id, vocabulary=domain, functions=fs, config=config)


def frequency_weight(bundle: CorpusBundle) -> WeightVector:
    """Baseline weight: each term's share of all term occurrences in the corpus."""
    return normalized_weight(bundle.vocabulary, bundle.functions.matrix.sum(axis=0))


def project(
    f_raw: Mapping[str, float], vocabulary: IndexSet
) -> tuple[NonnegFunction, float]:
    """Restrict a bag of counts to ``vocabulary``.

    Returns the projected function and the total count of dropped
    out-of-vocabulary terms.
    """
    values = np.zeros(len(vocabulary))
    dropped = 0.0
    for term, count in f_raw.items():
        if term in vocabulary:
            values[vocabulary.index(term)] += count
        else:
            dropped += count
    return NonnegFunction(vocabulary, values), float(dropped)


@dataclass(frozen=True)
class SupportReport:
    support_size: int
    support_fraction: float
    top_terms: list[tuple[str, float]]


def support_report(w: WeightSolution, bundle: CorpusBundle, top: Optional[int] = None) -> SupportReport:
    """Size of the weight's support relative to the vocabulary, heaviest terms first."""
    values = w.primal.values
    if w.primal.index_set != bundle.vocabulary:
        raise ValueError("weight was not computed on this bundle's vocabulary")
    idx = np.flatnonzero(values > NONZERO_TOL)
    order = idx[np.lexsort((idx, -values[idx]))]
    terms = [(bundle.vocabulary.labels[j], float(values[j])) for j in order]
    if top is not None:
        terms = terms[:top]
    return SupportReport(
        support_size=int(idx.size),
        support_fraction=idx.size / len(bundle.vocabulary),
        top_terms=terms,
    )
