import numpy as np
import pytest

from relweights import _kernels
from relweights.core import FunctionSet


def example1(n, eps, extra=0):
    """``n`` functions, each 1 on its own element and ``eps`` elsewhere."""
    A = np.full((n, n + extra), eps)
    A[np.arange(n), np.arange(n)] = 1.0
    return FunctionSet.from_rows(A)


def example2(sizes):
    """Indicator functions sharing only ``v0``; ``sizes[i]`` private elements each."""
    n_private = sum(sizes)
    A = np.zeros((len(sizes), 1 + n_private))
    A[:, 0] = 1.0
    col = 1
    for i, k in enumerate(sizes):
        A[i, col:col + k] = 1.0
        col += k
    domain = ["v0"] + [f"p{j}" for j in range(n_private)]
    return FunctionSet.from_rows(A, domain=domain)


def random_set(rng, max_rows=8, max_cols=8, rows=None, cols=None):
    r = rows or int(rng.integers(1, max_rows + 1))
    c = cols or int(rng.integers(1, max_cols + 1))
    return FunctionSet.from_rows(rng.uniform(0.0, 1.0, (r, c)))


@pytest.fixture
def ex1_2x2():
    return FunctionSet.from_rows([[1.0, 0.1], [0.1, 1.0]], domain=["a", "b"], members=["m1", "m2"])


@pytest.fixture
def ex2_3():
    return FunctionSet.from_rows(
        [[1.0, 1.0, 0.0], [1.0, 0.0, 1.0]], domain=["v0", "a", "b"], members=["m1", "m2"]
    )


@pytest.fixture(params=_kernels.available_backends())
def backend(request):
    return request.param


# one PASS/FAIL line per acceptance criterion in the terminal summary
_acceptance = []


def pytest_runtest_logreport(report):
    if report.when == "call" and "test_acceptance.py" in report.nodeid:
        detail = dict(report.user_properties).get("detail", "")
        _acceptance.append((report.nodeid.split("::")[-1], report.outcome, detail))


def pytest_terminal_summary(terminalreporter):
    if not _acceptance:
        return
    terminalreporter.section("acceptance criteria")
    for name, outcome, detail in _acceptance:
        line = f"{'PASS' if outcome == 'passed' else 'FAIL'}  {name}"
        terminalreporter.write_line(f"{line}: {detail}" if detail else line)
