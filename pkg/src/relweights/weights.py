"""Supporting and covering weights, their role-swapped variants, and a
machine check of the duality relations between the four problems.

Naming used throughout:

* ``supporting_weight(S)``: max over ``x`` on V of min over M of ``(x, m)``.
* ``covering_weight(S)``: min over ``x`` on V of max over M of ``(x, m)``.
* ``hat_*``: the same problems on ``transpose(S)``, i.e. weights on M
  scored against the functions ``m -> m(v)``.

Problem pairs (supporting, hat covering) and (covering, hat supporting) are
LP duals of each other, so their optimal values coincide and optimal
solutions satisfy complementary slackness.
"""
from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .core import FunctionSet, WeightVector, transpose
from .simplex import Kind, build_problem, solve_lp

NONZERO_TOL = 1e-8
DUALITY_TOL = 1e-8
SLACKNESS_TOL = 1e-7
INVARIANT_TOL = 1e-9


@dataclass(frozen=True)
class WeightSolution:
    kind: Kind
    alpha: float
    primal: WeightVector
    dual: WeightVector
    tight_members: list[str] = field(default_factory=list)
    tight_domain: list[str] = field(default_factory=list)
    mean_member_norm: float = 1.0
    iterations: int = 0

    @property
    def support(self) -> list[str]:
        return self.primal.support(NONZERO_TOL)


def _solve(fs: FunctionSet, kind: Kind, backend=None) -> WeightSolution:
    sol = solve_lp(build_problem(fs, kind), backend=backend)
    # domain elements where the dual-weighted column value reaches alpha
    col_values = sol.dual.values @ fs.matrix
    tight_domain = fs.domain.subset(np.abs(col_values - sol.alpha) <= SLACKNESS_TOL)
    return WeightSolution(
        kind=kind,
        alpha=sol.alpha,
        primal=sol.x,
        dual=sol.dual,
        tight_members=sol.tight_set,
        tight_domain=tight_domain,
        mean_member_norm=fs.mean_member_norm(),
        iterations=sol.iterations,
    )


def supporting_weight(fs: FunctionSet, backend=None) -> WeightSolution:
    """Max-min weight on the domain.

    ``dual`` is a covering weight on the members for the transposed set,
    read off the final simplex tableau.
    """
    return _solve(fs, Kind.SUPPORTING, backend)


def covering_weight(fs: FunctionSet, backend=None) -> WeightSolution:
    """Min-max weight on the domain; ``dual`` is a hat supporting weight."""
    return _solve(fs, Kind.COVERING, backend)


def hat_supporting_weight(fs: FunctionSet, backend=None) -> WeightSolution:
    return supporting_weight(transpose(fs), backend)


def hat_covering_weight(fs: FunctionSet, backend=None) -> WeightSolution:
    return covering_weight(transpose(fs), backend)


@dataclass
class DualityReport:
    """Outcome of :func:`verify_theorem3`.

    ``gap`` is the larger of the two cross-dual value differences
    (supporting vs hat covering, covering vs hat supporting).
    ``max_violation`` is the largest complementary slackness residual seen,
    whether or not it exceeded the tolerance; ``slackness_violations`` lists
    only those that did.
    """

    alpha_primal: float
    alpha_dual: float
    alpha_cover: float
    alpha_hat_support: float
    gap: float
    slackness_violations: list[tuple[str, float]]
    max_violation: float
    solutions: dict[str, WeightSolution] = field(default_factory=dict, repr=False)

    @property
    def gap_support(self) -> float:
        return abs(self.alpha_primal - self.alpha_dual)

    @property
    def gap_cover(self) -> float:
        return abs(self.alpha_cover - self.alpha_hat_support)

    @property
    def ok(self) -> bool:
        return self.gap <= DUALITY_TOL and self.max_violation <= SLACKNESS_TOL


def _slackness(tag, weight, residual, out):
    """Collect ``(label, residual)`` for every label where ``weight`` is nonzero."""
    worst = 0.0
    for label, w, r in zip(weight.index_set.labels, weight.values, residual):
        if abs(w) > NONZERO_TOL:
            r = float(abs(r))
            worst = max(worst, r)
            if r > SLACKNESS_TOL:
                out.append((f"{tag}:{label}", r))
    return worst


def verify_theorem3(fs: FunctionSet, backend=None, workers: int = 1) -> DualityReport:
    """Solve all four problems independently and check the duality relations.

    Checks value equalities ``alpha(supporting) == alpha(hat covering)`` and
    ``alpha(covering) == alpha(hat supporting)``, then complementary
    slackness in both directions for each dual pair. The tableau duals of
    the two direct problems are checked too, as a second route to the same
    optimal values. Violations are reported, never raised.
    """
    jobs = {
        "supporting": supporting_weight,
        "covering": covering_weight,
        "hat_supporting": hat_supporting_weight,
        "hat_covering": hat_covering_weight,
    }
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            futures = {k: pool.submit(f, fs, backend) for k, f in jobs.items()}
            sols = {k: fut.result() for k, fut in futures.items()}
    else:
        sols = {k: f(fs, backend) for k, f in jobs.items()}

    A = fs.matrix
    sup, cov = sols["supporting"], sols["covering"]
    hsup, hcov = sols["hat_supporting"], sols["hat_covering"]
    a_m, a_bar_m = sup.alpha, cov.alpha

    violations: list[tuple[str, float]] = []
    worst = 0.0
    # members carrying hat-covering mass are tight for the supporting weight
    worst = max(worst, _slackness("support_members", hcov.primal, A @ sup.primal.values - a_m, violations))
    # domain elements carrying supporting mass are tight for the hat-covering weight
    worst = max(worst, _slackness("support_domain", sup.primal, hcov.primal.values @ A - a_m, violations))
    # mirror image for the covering / hat-supporting pair
    worst = max(worst, _slackness("cover_members", hsup.primal, A @ cov.primal.values - a_bar_m, violations))
    worst = max(worst, _slackness("cover_domain", cov.primal, hsup.primal.values @ A - a_bar_m, violations))
    # tableau duals must be optimal for the problems they are dual to
    worst = max(worst, _slackness("support_dual_members", sup.dual, A @ sup.primal.values - a_m, violations))
    worst = max(worst, _slackness("support_dual_domain", sup.primal, sup.dual.values @ A - a_m, violations))
    worst = max(worst, _slackness("cover_dual_members", cov.dual, A @ cov.primal.values - a_bar_m, violations))
    worst = max(worst, _slackness("cover_dual_domain", cov.primal, cov.dual.values @ A - a_bar_m, violations))
    for tag, dual, value, target in (
        ("dualvalue_support", sup.dual, (sup.dual.values @ A).max(), a_m),
        ("dualvalue_cover", cov.dual, (cov.dual.values @ A).min(), a_bar_m),
    ):
        r = float(abs(value - target))
        worst = max(worst, r)
        if r > SLACKNESS_TOL:
            violations.append((tag, r))

    gap = max(abs(a_m - hcov.alpha), abs(a_bar_m - hsup.alpha))
    return DualityReport(
        alpha_primal=a_m,
        alpha_dual=hcov.alpha,
        alpha_cover=a_bar_m,
        alpha_hat_support=hsup.alpha,
        gap=gap,
        slackness_violations=violations,
        max_violation=worst,
        solutions=sols,
    )
