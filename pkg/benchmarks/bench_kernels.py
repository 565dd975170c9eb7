"""Compare the numba and pure-numpy kernel backends.

Usage::

    python3 benchmarks/bench_kernels.py            # default sizes
    python3 benchmarks/bench_kernels.py --quick    # smaller, for a smoke run

Each case is solved once per backend before timing so JIT compilation is
excluded. Both backends follow the same pivot sequence, so the script also
checks that they agree on alpha.
"""
import argparse
import time

import numpy as np

from relweights import _kernels
from relweights.core import FunctionSet, transpose
from relweights.oracle import oracle_maxmin
from relweights.simplex import build_problem, solve_lp


def _count_matrix(rng, n_docs, n_terms):
    A = rng.poisson(0.3, (n_docs, n_terms)).astype(float)
    A[:, A.sum(axis=0) == 0] = 1.0
    return FunctionSet.from_rows(A)


def _time(fn, repeat):
    best = np.inf
    for _ in range(repeat):
        start = time.perf_counter()
        out = fn()
        best = min(best, time.perf_counter() - start)
    return best, out


def simplex_cases(rng, quick):
    small = [FunctionSet.from_rows(rng.uniform(0, 1, (8, 8))) for _ in range(50)]
    shapes = [(20, 200), (50, 500)] if quick else [(20, 400), (50, 1000), (50, 2000)]
    yield "simplex 50 x (8x8)", lambda b: [
        solve_lp(build_problem(fs, "supporting"), backend=b).alpha for fs in small
    ]
    for n_docs, n_terms in shapes:
        fs = _count_matrix(rng, n_docs, n_terms)
        yield f"simplex supporting {n_docs}x{n_terms}", lambda b, fs=fs: solve_lp(
            build_problem(fs, "supporting"), backend=b).alpha
        if n_terms <= (500 if quick else 1000):
            fs_t = transpose(fs)
            yield f"simplex transposed {n_terms}x{n_docs}", lambda b, fs=fs_t: solve_lp(
                build_problem(fs, "supporting"), backend=b).alpha


def oracle_cases(rng, quick):
    for n in ((5, 6) if quick else (6, 7, 8)):
        fs = FunctionSet.from_rows(rng.uniform(0, 1, (n, n)))
        yield f"oracle {n}x{n}", lambda b, fs=fs: oracle_maxmin(fs, backend=b)[0]


def main(argv=None):
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--quick", action="store_true", help="smaller problem sizes")
    parser.add_argument("--repeat", type=int, default=3, help="timing repetitions (best is reported)")
    parser.add_argument("--seed", type=int, default=0)
    args = parser.parse_args(argv)

    backends = _kernels.available_backends()
    if "numba" not in backends:
        print("numba is not installed; only the numpy backend is timed")
    rng = np.random.default_rng(args.seed)

    header = f"{'case':<34}" + "".join(f"{b + ' [s]':>14}" for b in backends)
    if len(backends) == 2:
        header += f"{'speedup':>10}"
    print(header)
    print("-" * len(header))
    for name, fn in [*simplex_cases(rng, args.quick), *oracle_cases(rng, args.quick)]:
        times, results = [], []
        for b in backends:
            fn(b)  # warm-up, includes JIT compilation
            t, out = _time(lambda: fn(b), args.repeat)
            times.append(t)
            results.append(np.asarray(out))
        line = f"{name:<34}" + "".join(f"{t:>14.4f}" for t in times)
        if len(backends) == 2:
            line += f"{times[1] / times[0]:>9.1f}x"
            if not np.allclose(results[0], results[1], rtol=0, atol=1e-12):
                line += "  (alpha mismatch)"
        print(line, flush=True)


if __name__ == "__main__":
    main()
