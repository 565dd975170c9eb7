"""Relevance / irrelevance scores and the threshold decision rule.

A function ``f`` is scored against the supporting weight (relevance ``r``)
and the covering weight (irrelevance ``s``). It is declared relevant when
``r`` reaches the supporting value ``alpha``; every member of the training
set passes this test by construction.

The rule is scale sensitive: ``r`` is linear in ``f`` while the threshold is
fixed. ``normalize=True`` rescales ``f`` to the mean L1 norm of the training
members before scoring; the default scores ``f`` as given.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping, Sequence, Union

import numpy as np

from .core import IndexSetMismatch, NonnegFunction, RelweightsError, pairing
from .simplex import Kind
from .weights import WeightSolution

DECISION_TOL = 1e-12


class KindMismatch(RelweightsError, ValueError):
    pass


@dataclass(frozen=True)
class RelevanceReport:
    corpus_id: str
    r: float
    s: float
    alpha_support: float
    alpha_cover: float
    relevant: bool
    margin: float
    scale: float = 1.0
    dropped_mass: float = 0.0

    @property
    def ratio(self) -> float:
        """Ranking statistic ``r / alpha``; raw ``r`` when ``alpha`` is zero."""
        return self.r / self.alpha_support if self.alpha_support > 0 else self.r

    def to_dict(self) -> dict:
        return {
            "corpus_id": self.corpus_id,
            "r": self.r,
            "s": self.s,
            "alpha_support": self.alpha_support,
            "alpha_cover": self.alpha_cover,
            "relevant": self.relevant,
            "margin": self.margin,
            "scale": self.scale,
            "dropped_mass": self.dropped_mass,
        }


def _score(f: NonnegFunction, w: WeightSolution, kind: Kind) -> float:
    if w.kind is not kind:
        raise KindMismatch(f"expected a {kind.value} weight, got {w.kind.value}")
    if f.index_set != w.primal.index_set:
        raise IndexSetMismatch("function and weight live on different index sets")
    return pairing(f, w.primal)


def relevance_score(f: NonnegFunction, w: WeightSolution) -> float:
    """``sum_v f(v) x(v)`` against a supporting weight."""
    return _score(f, w, Kind.SUPPORTING)


def irrelevance_score(f: NonnegFunction, w: WeightSolution) -> float:
    """``sum_v f(v) x(v)`` against a covering weight; smaller means more relevant."""
    return _score(f, w, Kind.COVERING)


def classify(
    f: NonnegFunction,
    support_w: WeightSolution,
    cover_w: WeightSolution,
    corpus_id: str = "",
    normalize: bool = False,
    dropped_mass: float = 0.0,
) -> RelevanceReport:
    if support_w.primal.index_set != cover_w.primal.index_set:
        raise IndexSetMismatch("supporting and covering weights come from different sets")
    scale = 1.0
    if normalize and f.norm > 0:
        scale = support_w.mean_member_norm / f.norm
        f = NonnegFunction(f.index_set, f.values * scale)
    r = relevance_score(f, support_w)
    s = irrelevance_score(f, cover_w)
    alpha = support_w.alpha
    return RelevanceReport(
        corpus_id=corpus_id,
        r=r,
        s=s,
        alpha_support=alpha,
        alpha_cover=cover_w.alpha,
        relevant=r >= alpha - DECISION_TOL,
        margin=r - alpha,
        scale=scale,
        dropped_mass=dropped_mass,
    )


@dataclass
class Ranking:
    """Reports ordered best first, plus per-corpus failures keyed by id."""

    reports: list[RelevanceReport] = field(default_factory=list)
    errors: dict[str, str] = field(default_factory=dict)

    def __iter__(self):
        return iter(self.reports)

    def __len__(self) -> int:
        return len(self.reports)

    def __getitem__(self, i):
        return self.reports[i]

    @property
    def best(self):
        return self.reports[0] if self.reports else None


FunctionLike = Union[NonnegFunction, Mapping[str, float]]


def multi_classify(
    f: FunctionLike,
    weights: Sequence[tuple[str, WeightSolution, WeightSolution]],
    normalize: bool = False,
) -> Ranking:
    """Score ``f`` against several corpora and rank them.

    ``f`` may be a bag of term counts, which is projected onto each corpus
    vocabulary (out-of-vocabulary mass is recorded per report), or a
    function already on a shared domain. Ranking is by ``r / alpha``
    descending with ties broken by corpus id. A corpus that fails to score
    is recorded in ``Ranking.errors`` and left out of the ranking.
    """
    from .corpus import project

    ranking = Ranking()
    for corpus_id, support_w, cover_w in weights:
        try:
            if isinstance(f, NonnegFunction):
                g, dropped = f, 0.0
            else:
                g, dropped = project(f, support_w.primal.index_set)
            ranking.reports.append(
                classify(g, support_w, cover_w, corpus_id, normalize, dropped_mass=dropped)
            )
        except (RelweightsError, ValueError) as exc:
            ranking.errors[corpus_id] = f"{type(exc).__name__}: {exc}"
    ranking.reports.sort(key=lambda rep: (-rep.ratio, rep.corpus_id))
    return ranking


def zero_function(index_set) -> NonnegFunction:
    return NonnegFunction(index_set, np.zeros(len(index_set)))
