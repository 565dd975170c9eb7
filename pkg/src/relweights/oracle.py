"""Brute-force reference for small max-min / min-max problems (testing only).

Every basic optimum of the supporting problem either has ``alpha`` basic, in
which case it solves a square system built from ``k`` domain elements and
``k`` tight member rows, or has ``alpha = 0``, which a simplex-vertex sweep
already attains. Enumerating all such systems therefore finds the optimum
without any pivoting. Shares no code with :mod:`relweights.simplex`.
"""
from __future__ import annotations

import numpy as np

from . import _kernels
from .core import FunctionSet, RelweightsError, WeightVector, normalized_weight

MAX_DIM = 8
FEAS_TOL = 1e-9


class BudgetExceeded(RelweightsError):
    pass


def _check_budget(fs: FunctionSet):
    n_m, n_v = fs.shape
    if n_m > MAX_DIM or n_v > MAX_DIM:
        raise BudgetExceeded(f"oracle is limited to {MAX_DIM}x{MAX_DIM}, got {n_m}x{n_v}")


def _search(fs: FunctionSet, sense: int, backend=None) -> tuple[float, WeightVector]:
    _check_budget(fs)
    A = fs.matrix
    alpha, x = _kernels.enumerate_bases(A, sense, FEAS_TOL, backend=backend)

    # vertex sweep: x = e_v, value = min (or max) over the column
    col_values = A.min(axis=0) if sense > 0 else A.max(axis=0)
    j = int(np.argmax(sense * col_values))
    if np.isnan(alpha) or sense * (col_values[j] - alpha) > FEAS_TOL:
        alpha = float(col_values[j])
        x = np.zeros(A.shape[1])
        x[j] = 1.0
    return alpha, normalized_weight(fs.domain, np.where(np.abs(x) <= 1e-12, 0.0, x))


def oracle_maxmin(fs: FunctionSet, backend=None) -> tuple[float, WeightVector]:
    """Exact ``max_x min_m (x, m)`` over the simplex by basis enumeration.

    Raises
    ------
    BudgetExceeded
        If either dimension exceeds 8.
    """
    return _search(fs, +1, backend)


def oracle_minimax(fs: FunctionSet, backend=None) -> tuple[float, WeightVector]:
    """Exact ``min_x max_m (x, m)`` over the simplex by basis enumeration."""
    return _search(fs, -1, backend)
