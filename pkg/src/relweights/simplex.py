"""Two-phase primal simplex for the supporting and covering weight problems.

For a function set with matrix ``A`` (rows ``m``, columns ``v``) the solver
handles exactly two LP shapes over variables ``x >= 0`` and a free ``alpha``::

    SUPPORTING:  maximize alpha  s.t.  sum(x) = 1,  alpha - (x, m) <= 0  for all m
    COVERING:    minimize alpha  s.t.  sum(x) = 1,  alpha - (x, m) >= 0  for all m

``alpha`` is split as ``alpha_plus - alpha_minus``. Each member row gets a
slack with coefficient +1 (covering rows are negated first), so the slacks
form a feasible starting basis on those rows; only the normalization row
needs an artificial variable.
"""
from __future__ import annotations

import enum
import logging
from dataclasses import dataclass, field

import numpy as np

from . import _kernels
from .core import (
    FunctionSet,
    RelweightsError,
    WeightVector,
    normalized_weight,
)

logger = logging.getLogger(__name__)

PIVOT_TOL = 1e-10
CLEAN_TOL = 1e-10
TIGHT_TOL = 1e-7
FEAS_TOL = 1e-9
REFACTOR_MIN = 64


class Kind(str, enum.Enum):
    SUPPORTING = "supporting"
    COVERING = "covering"


class Sense(str, enum.Enum):
    MAXIMIZE = "maximize"
    MINIMIZE = "minimize"


class SolverError(RelweightsError):
    pass


class Infeasible(SolverError):
    pass


class IterationLimit(SolverError):
    pass


@dataclass(frozen=True)
class LpProblem:
    kind: Kind
    function_set: FunctionSet
    sense: Sense

    def __post_init__(self):
        expected = Sense.MAXIMIZE if self.kind is Kind.SUPPORTING else Sense.MINIMIZE
        if self.sense is not expected:
            raise ValueError(f"{self.kind.value} problems must {expected.value} alpha")

    @property
    def n_variables(self) -> int:
        """Structural variables: one per domain element plus ``alpha``."""
        return len(self.function_set.domain) + 1

    @property
    def n_equalities(self) -> int:
        return 1

    @property
    def n_inequalities(self) -> int:
        return len(self.function_set.members)

    @property
    def iteration_limit(self) -> int:
        n_m, n_v = self.function_set.shape
        return 50 * (n_v + n_m + 2)

    def constraint_rows(self):
        """Dense ``(A_eq, b_eq, A_ub, b_ub)`` over ``[x..., alpha]``.

        Inequalities are in ``<=`` form, for inspection and for checking
        against external LP codes.
        """
        A = self.function_set.matrix
        n_m, n_v = A.shape
        A_eq = np.zeros((1, n_v + 1))
        A_eq[0, :n_v] = 1.0
        sign = 1.0 if self.kind is Kind.SUPPORTING else -1.0
        A_ub = np.hstack([-sign * A, sign * np.ones((n_m, 1))])
        return A_eq, np.ones(1), A_ub, np.zeros(n_m)


@dataclass(frozen=True)
class LpSolution:
    kind: Kind
    alpha: float
    x: WeightVector
    dual: WeightVector
    tight_set: list[str] = field(default_factory=list)
    iterations: int = 0


def build_problem(fs: FunctionSet, kind) -> LpProblem:
    kind = Kind(kind)
    sense = Sense.MAXIMIZE if kind is Kind.SUPPORTING else Sense.MINIMIZE
    return LpProblem(kind=kind, function_set=fs, sense=sense)


def _initial_tableau(problem: LpProblem):
    A = problem.function_set.matrix
    n_m, n_v = A.shape
    sign = 1.0 if problem.kind is Kind.SUPPORTING else -1.0
    # columns: x (n_v) | alpha+ | alpha- | slacks (n_m) | artificial | rhs
    a_plus = n_v
    slack0 = n_v + 2
    art = slack0 + n_m
    n_cols = art + 2
    R = n_m + 1
    T = np.zeros((R + 1, n_cols))
    T[0, :n_v] = 1.0
    T[0, art] = 1.0
    T[0, -1] = 1.0
    T[1:R, :n_v] = -sign * A
    T[1:R, a_plus] = sign
    T[1:R, a_plus + 1] = -sign
    T[1:R, slack0:art] = np.eye(n_m)
    basis = np.empty(R, dtype=np.int64)
    basis[0] = art
    basis[1:] = np.arange(slack0, art)

    cost = np.zeros(n_cols - 1)
    cost[a_plus] = sign
    cost[a_plus + 1] = -sign
    return T, basis, cost, (a_plus, slack0, art)


def _set_objective(T, basis, cost):
    R = T.shape[0] - 1
    cb = cost[basis]
    T[R, :-1] = cb @ T[:R, :-1] - cost
    T[R, -1] = cb @ T[:R, -1]


def _refactor(T, T0, basis, unit_row):
    """Rebuild the constraint rows as ``B^-1 [A | b]`` from the original data.

    Slack and artificial columns are unit vectors, so only the square block
    of the other basic columns on the rows no basic unit column covers needs
    a dense solve; the remaining rows follow by substitution.
    """
    R = T.shape[0] - 1
    units = unit_row[basis]
    pos_unit = np.flatnonzero(units >= 0)
    pos_other = np.flatnonzero(units < 0)
    covered = units[pos_unit]
    free_rows = np.setdiff1d(np.arange(R), covered)
    other_cols = basis[pos_other]
    data = T0[:R]
    if pos_other.size:
        try:
            Z = np.linalg.solve(data[np.ix_(free_rows, other_cols)], data[free_rows])
        except np.linalg.LinAlgError as exc:
            raise SolverError("basis matrix became singular") from exc
        T[pos_other] = Z
        T[pos_unit] = data[covered] - data[np.ix_(covered, other_cols)] @ Z
    else:
        T[pos_unit] = data[covered]
    T[:R, basis] = np.eye(R)
    rhs = T[:R, -1]
    if rhs.min() < -FEAS_TOL:
        raise SolverError(f"basis lost primal feasibility (rhs {rhs.min():.3e})")
    rhs[rhs < 0] = 0.0


def _optimize(T, T0, basis, unit_row, cost, n_enter, budget, backend):
    """Pivot to optimality, refactorizing every ``refactor_every`` pivots.

    Long pivot sequences accumulate round-off in the tableau; on degenerate
    problems that noise can masquerade as a small positive pivot. The kernel
    stops before any suspiciously small pivot, the tableau is rebuilt from
    the original data, and pivoting resumes. A final refactor guarantees the
    solution and reduced costs are read from a freshly computed tableau.
    """
    R = T.shape[0] - 1
    refactor_every = max(REFACTOR_MIN, R)
    used = 0
    while True:
        _set_objective(T, basis, cost)
        chunk = min(refactor_every, budget - used)
        status, iters = _kernels.simplex_loop(T, basis, n_enter, chunk, PIVOT_TOL, backend)
        used += iters
        if status == _kernels.STATUS_UNBOUNDED:
            # alpha is bounded by the matrix entries, so this signals numerical trouble
            raise SolverError("simplex reported an unbounded direction")
        if iters:
            # also handles STATUS_SMALL_PIVOT: the pivot is re-examined on fresh data
            _refactor(T, T0, basis, unit_row)
            continue
        if status == _kernels.STATUS_ITERATION_LIMIT:
            raise IterationLimit(f"pivot budget exhausted after {used} pivots")
        return used


def _clean(values):
    values = np.array(values, dtype=np.float64)
    values[np.abs(values) <= CLEAN_TOL] = 0.0
    return values


def solve_lp(problem: LpProblem, backend: str | None = None) -> LpSolution:
    """Solve a supporting or covering problem to an optimal basic solution.

    Parameters
    ----------
    problem : LpProblem
        Built by :func:`build_problem`.
    backend : {"numba", "numpy"}, optional
        Kernel flavour; defaults to the import-time selection.

    Returns
    -------
    LpSolution
        ``x`` is the primal weight on the domain, ``dual`` the optimal dual
        weight on the members (read from the reduced costs of the slack
        columns). ``alpha`` is recomputed from the cleaned ``x`` as the min
        (supporting) or max (covering) of the member pairings.

    Raises
    ------
    IterationLimit
        If more than ``50 * (|V| + |M| + 2)`` pivots are needed.
    Infeasible
        Never for a valid function set; signals an internal error.
    """
    fs = problem.function_set
    A = fs.matrix
    n_m, n_v = A.shape
    T, basis, cost, (a_plus, slack0, art) = _initial_tableau(problem)
    budget = problem.iteration_limit
    R = n_m + 1

    T0 = T.copy()
    unit_row = np.full(art + 1, -1, dtype=np.int64)
    unit_row[slack0:art] = np.arange(1, R)
    unit_row[art] = 0

    # phase 1: drive the single artificial to zero
    phase1_cost = np.zeros_like(cost)
    phase1_cost[art] = -1.0
    iters = _optimize(T, T0, basis, unit_row, phase1_cost, art + 1, budget, backend)
    if T[R, -1] < -PIVOT_TOL:
        raise Infeasible("normalization row cannot be satisfied")

    for i in np.flatnonzero(basis == art):
        candidates = np.flatnonzero(np.abs(T[i, :art]) > PIVOT_TOL)
        if candidates.size == 0:
            continue  # redundant row; artificial stays basic at zero
        basis[i] = int(candidates[0])
        _refactor(T, T0, basis, unit_row)
        iters += 1

    # phase 2: artificial barred from entering
    iters += _optimize(T, T0, basis, unit_row, cost, art, budget - iters, backend)

    z = np.zeros(art + 1)
    z[basis] = T[:R, -1]
    x_raw = _clean(z[:n_v])
    dual_raw = _clean(T[R, slack0:art])
    logger.debug("solved %s problem %dx%d in %d pivots", problem.kind.value, n_m, n_v, iters)

    x = normalized_weight(fs.domain, x_raw)
    dual = normalized_weight(fs.members, dual_raw)
    values = A @ x.values
    alpha = float(values.min() if problem.kind is Kind.SUPPORTING else values.max())
    tight = fs.members.subset(np.abs(values - alpha) <= TIGHT_TOL)
    return LpSolution(
        kind=problem.kind, alpha=alpha, x=x, dual=dual, tight_set=tight, iterations=iters
    )
