"""Hot numeric loops, in a numba-compiled and a pure-numpy flavour.

The backend is chosen once at import time. Set ``RELWEIGHTS_PURE_NUMPY=1``
to force the numpy path; it is also used automatically when numba is not
importable. Both flavours implement the same pivot rules, so they follow the
same pivot sequence on the same tableau.

Tableau layout used by :func:`simplex_loop`: rows ``0..R-1`` are constraint
rows ``[A | b]``, row ``R`` holds reduced costs ``c_B B^-1 A - c`` with the
current objective value in the last column. The problem is a maximization;
a tableau is optimal when no admissible reduced cost is below ``-tol``.
"""
from __future__ import annotations

import os
from itertools import combinations

import numpy as np

STATUS_OPTIMAL = 0
STATUS_UNBOUNDED = 1
STATUS_ITERATION_LIMIT = 2
STATUS_SMALL_PIVOT = 3

# a pivot below this fraction of its column's largest entry may be round-off
SMALL_PIVOT_RATIO = 1e-6

_FORCE_NUMPY = os.environ.get("RELWEIGHTS_PURE_NUMPY", "").strip().lower() in {
    "1", "true", "yes", "on",
}

try:
    import numba

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover - numba is an optional extra
    numba = None
    HAVE_NUMBA = False

BACKEND = "numpy" if (_FORCE_NUMPY or not HAVE_NUMBA) else "numba"


# --------------------------------------------------------------------------
# simplex: numpy flavour
# --------------------------------------------------------------------------

def _simplex_loop_numpy(T, basis, n_enter, max_iter, tol):
    R = T.shape[0] - 1
    iters = 0
    while True:
        obj = T[R, :n_enter]
        candidates = np.flatnonzero(obj < -tol)
        if candidates.size == 0:
            return STATUS_OPTIMAL, iters
        if iters >= max_iter:
            return STATUS_ITERATION_LIMIT, iters
        col = candidates[0]

        column = T[:R, col]
        eligible = np.flatnonzero(column > tol)
        if eligible.size == 0:
            return STATUS_UNBOUNDED, iters
        # negative round-off in the rhs counts as a degenerate zero
        ratios = np.maximum(T[eligible, -1], 0.0) / column[eligible]
        ties = eligible[ratios == ratios.min()]
        row = ties[np.argmin(basis[ties])]
        if iters > 0 and column[row] < SMALL_PIVOT_RATIO * np.abs(column).max():
            return STATUS_SMALL_PIVOT, iters

        _pivot_numpy(T, row, col, tol)
        basis[row] = col
        iters += 1


def _pivot_numpy(T, row, col, tol):
    T[row] /= T[row, col]
    # only columns where the pivot row is nonzero change
    cols = np.flatnonzero(T[row])
    factors = T[:, col].copy()
    factors[row] = 0.0
    rows = np.flatnonzero(factors)
    T[np.ix_(rows, cols)] -= np.outer(factors[rows], T[row, cols])
    T[:, col] = 0.0
    T[row, col] = 1.0


# --------------------------------------------------------------------------
# oracle enumeration: numpy flavour
# --------------------------------------------------------------------------

def _enumerate_bases_numpy(matrix, sense, feas_tol, sing_tol):
    """Best candidate over equal-size (domain subset, member subset) pairs.

    ``sense`` is +1 for max-min, -1 for min-max. Returns ``(alpha, x)`` with
    ``alpha = nan`` if no square candidate system was feasible.
    """
    n_m, n_v = matrix.shape
    best_alpha = np.nan
    best_x = np.zeros(n_v)
    for k in range(1, min(n_v, n_m) + 1):
        for S in combinations(range(n_v), k):
            sub = matrix[:, S]
            for Tm in combinations(range(n_m), k):
                system = np.zeros((k + 1, k + 1))
                system[:k, :k] = sub[Tm, :]
                system[:k, k] = -1.0
                system[k, :k] = 1.0
                rhs = np.zeros(k + 1)
                rhs[k] = 1.0
                sol = _gauss_solve_numpy(system, rhs, sing_tol)
                if sol is None:
                    continue
                xs, alpha = sol[:k], sol[k]
                if np.any(xs < -feas_tol):
                    continue
                values = sub @ xs
                if sense > 0 and np.any(values < alpha - feas_tol):
                    continue
                if sense < 0 and np.any(values > alpha + feas_tol):
                    continue
                if np.isnan(best_alpha) or sense * (alpha - best_alpha) > feas_tol:
                    best_alpha = alpha
                    best_x = np.zeros(n_v)
                    best_x[list(S)] = xs
    return best_alpha, best_x


def _gauss_solve_numpy(A, b, sing_tol):
    A = A.copy()
    b = b.copy()
    n = A.shape[0]
    for k in range(n):
        p = k + int(np.argmax(np.abs(A[k:, k])))
        if abs(A[p, k]) <= sing_tol:
            return None
        if p != k:
            A[[k, p]] = A[[p, k]]
            b[[k, p]] = b[[p, k]]
        f = A[k + 1:, k] / A[k, k]
        A[k + 1:, k:] -= np.outer(f, A[k, k:])
        b[k + 1:] -= f * b[k]
    x = np.zeros(n)
    for k in range(n - 1, -1, -1):
        x[k] = (b[k] - A[k, k + 1:] @ x[k + 1:]) / A[k, k]
    return x


# --------------------------------------------------------------------------
# numba flavour
# --------------------------------------------------------------------------

if HAVE_NUMBA:
    _jit = numba.njit(cache=True, nogil=True)

    @_jit
    def _pivot_numba(T, row, col, tol):
        n_rows, n_cols = T.shape
        piv = T[row, col]
        nz = np.empty(n_cols, dtype=np.int64)
        n_nz = 0
        for j in range(n_cols):
            T[row, j] = T[row, j] / piv
            if T[row, j] != 0.0:
                nz[n_nz] = j
                n_nz += 1
        for i in range(n_rows):
            if i == row:
                continue
            f = T[i, col]
            if f != 0.0:
                for k in range(n_nz):
                    j = nz[k]
                    T[i, j] = T[i, j] - f * T[row, j]
            T[i, col] = 0.0
        T[row, col] = 1.0

    @_jit
    def _simplex_loop_numba(T, basis, n_enter, max_iter, tol):
        R = T.shape[0] - 1
        last = T.shape[1] - 1
        iters = 0
        while True:
            col = -1
            for j in range(n_enter):
                if T[R, j] < -tol:
                    col = j
                    break
            if col < 0:
                return STATUS_OPTIMAL, iters
            if iters >= max_iter:
                return STATUS_ITERATION_LIMIT, iters

            row = -1
            best = np.inf
            for i in range(R):
                a = T[i, col]
                if a > tol:
                    ratio = max(T[i, last], 0.0) / a
                    if ratio < best or (ratio == best and basis[i] < basis[row]):
                        best = ratio
                        row = i
            if row < 0:
                return STATUS_UNBOUNDED, iters
            if iters > 0:
                colmax = 0.0
                for i in range(R):
                    colmax = max(colmax, abs(T[i, col]))
                if T[row, col] < SMALL_PIVOT_RATIO * colmax:
                    return STATUS_SMALL_PIVOT, iters

            _pivot_numba(T, row, col, tol)
            basis[row] = col
            iters += 1

    @_jit
    def _gauss_solve_numba(A, b, out, sing_tol):
        n = A.shape[0]
        for k in range(n):
            p = k
            big = abs(A[k, k])
            for i in range(k + 1, n):
                if abs(A[i, k]) > big:
                    big = abs(A[i, k])
                    p = i
            if big <= sing_tol:
                return False
            if p != k:
                for j in range(n):
                    tmp = A[k, j]
                    A[k, j] = A[p, j]
                    A[p, j] = tmp
                tmp = b[k]
                b[k] = b[p]
                b[p] = tmp
            for i in range(k + 1, n):
                f = A[i, k] / A[k, k]
                for j in range(k, n):
                    A[i, j] -= f * A[k, j]
                b[i] -= f * b[k]
        for k in range(n - 1, -1, -1):
            s = b[k]
            for j in range(k + 1, n):
                s -= A[k, j] * out[j]
            out[k] = s / A[k, k]
        return True

    @_jit
    def _next_combination(idx, n):
        # advance idx (sorted, length k) to the next k-subset of range(n)
        k = idx.shape[0]
        i = k - 1
        while i >= 0 and idx[i] == n - k + i:
            i -= 1
        if i < 0:
            return False
        idx[i] += 1
        for j in range(i + 1, k):
            idx[j] = idx[j - 1] + 1
        return True

    @_jit
    def _enumerate_bases_numba(matrix, sense, feas_tol, sing_tol):
        n_m, n_v = matrix.shape
        best_alpha = np.nan
        best_x = np.zeros(n_v)
        for k in range(1, min(n_v, n_m) + 1):
            S = np.arange(k)
            system = np.empty((k + 1, k + 1))
            rhs = np.empty(k + 1)
            sol = np.empty(k + 1)
            more_s = True
            while more_s:
                Tm = np.arange(k)
                more_t = True
                while more_t:
                    for a in range(k):
                        for c in range(k):
                            system[a, c] = matrix[Tm[a], S[c]]
                        system[a, k] = -1.0
                        rhs[a] = 0.0
                    for c in range(k):
                        system[k, c] = 1.0
                    system[k, k] = 0.0
                    rhs[k] = 1.0
                    if _gauss_solve_numba(system, rhs, sol, sing_tol):
                        alpha = sol[k]
                        ok = True
                        for c in range(k):
                            if sol[c] < -feas_tol:
                                ok = False
                                break
                        if ok:
                            for i in range(n_m):
                                val = 0.0
                                for c in range(k):
                                    val += matrix[i, S[c]] * sol[c]
                                if sense > 0 and val < alpha - feas_tol:
                                    ok = False
                                    break
                                if sense < 0 and val > alpha + feas_tol:
                                    ok = False
                                    break
                        if ok and (np.isnan(best_alpha)
                                   or sense * (alpha - best_alpha) > feas_tol):
                            best_alpha = alpha
                            best_x[:] = 0.0
                            for c in range(k):
                                best_x[S[c]] = sol[c]
                    more_t = _next_combination(Tm, n_m)
                more_s = _next_combination(S, n_v)
        return best_alpha, best_x


def simplex_loop(T, basis, n_enter, max_iter, tol, backend=None):
    """Run Bland's-rule primal simplex pivots in place on ``T``.

    Entering column: lowest index ``j < n_enter`` with reduced cost below
    ``-tol``. Leaving row: minimum ratio over entries above ``tol``, ties
    broken by the lowest basic variable index.

    Stops early with ``STATUS_SMALL_PIVOT`` when a pivot other than the
    first is tiny relative to its column; the caller should rebuild the
    tableau from the original data and resume, since the first pivot of a
    call is always taken.

    Returns ``(status, iterations)``.
    """
    backend = backend or BACKEND
    if backend == "numba":
        if not HAVE_NUMBA:
            raise RuntimeError("numba backend requested but numba is not installed")
        status, iters = _simplex_loop_numba(T, basis, n_enter, max_iter, tol)
    elif backend == "numpy":
        status, iters = _simplex_loop_numpy(T, basis, n_enter, max_iter, tol)
    else:
        raise ValueError(f"unknown backend {backend!r}")
    return int(status), int(iters)


def enumerate_bases(matrix, sense, feas_tol=1e-9, sing_tol=1e-12, backend=None):
    """Brute-force search over square basic systems of the max-min LP.

    ``sense=+1`` searches for max over ``x`` of min over rows, ``sense=-1``
    for min over ``x`` of max over rows.
    """
    backend = backend or BACKEND
    matrix = np.ascontiguousarray(matrix, dtype=np.float64)
    if backend == "numba":
        if not HAVE_NUMBA:
            raise RuntimeError("numba backend requested but numba is not installed")
        alpha, x = _enumerate_bases_numba(matrix, int(sense), feas_tol, sing_tol)
    elif backend == "numpy":
        alpha, x = _enumerate_bases_numpy(matrix, int(sense), feas_tol, sing_tol)
    else:
        raise ValueError(f"unknown backend {backend!r}")
    return float(alpha), np.asarray(x)


def available_backends() -> list[str]:
    return ["numba", "numpy"] if HAVE_NUMBA else ["numpy"]
