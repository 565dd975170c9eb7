import numpy as np
import pytest

from conftest import example1, example2, random_set
from relweights.core import FunctionSet, transpose
from relweights.simplex import Kind
from relweights.weights import (
    covering_weight,
    hat_covering_weight,
    hat_supporting_weight,
    supporting_weight,
    verify_theorem3,
)


def test_supporting_example1_three():
    w = supporting_weight(example1(3, 0.1))
    assert w.kind is Kind.SUPPORTING
    assert w.alpha == pytest.approx(1 / 3 + 0.1 * (2 / 3), abs=1e-12)
    assert w.alpha == pytest.approx(0.4, abs=1e-12)
    np.testing.assert_allclose(w.primal.values, [1 / 3] * 3, atol=1e-12)


def test_supporting_example2(ex2_3):
    w = supporting_weight(ex2_3)
    assert w.alpha == pytest.approx(1.0)
    np.testing.assert_allclose(w.primal.values, [1, 0, 0], atol=1e-12)
    assert w.support == ["v0"]


def test_supporting_dual_symmetric(ex1_2x2):
    np.testing.assert_allclose(supporting_weight(ex1_2x2).dual.values, [0.5, 0.5], atol=1e-12)


def test_covering_example2(ex2_3):
    w = covering_weight(ex2_3)
    assert w.alpha == pytest.approx(0.5, abs=1e-12)
    np.testing.assert_allclose(w.primal.values, [0, 0.5, 0.5], atol=1e-12)


def test_covering_example1(ex1_2x2):
    w = covering_weight(ex1_2x2)
    assert w.alpha == pytest.approx(0.55, abs=1e-12)
    assert w.alpha == pytest.approx(supporting_weight(ex1_2x2).alpha, abs=1e-12)
    np.testing.assert_allclose(w.primal.values, [0.5, 0.5], atol=1e-12)


def test_covering_all_ones_returns_vertex():
    w = covering_weight(FunctionSet.from_rows(np.ones((3, 4))))
    assert w.alpha == pytest.approx(1.0)
    assert np.count_nonzero(w.primal.values) == 1


def test_hat_weights_live_on_members(ex2_3):
    hs = hat_supporting_weight(ex2_3)
    hc = hat_covering_weight(ex2_3)
    assert hs.primal.index_set == ex2_3.members
    assert hs.dual.index_set == ex2_3.domain
    assert hs.alpha == pytest.approx(0.5, abs=1e-12)  # equals covering alpha
    assert hc.alpha == pytest.approx(1.0, abs=1e-12)  # equals supporting alpha


def test_hat_example1_symmetric(ex1_2x2):
    assert hat_supporting_weight(ex1_2x2).alpha == pytest.approx(0.55)
    assert hat_covering_weight(ex1_2x2).alpha == pytest.approx(0.55)


def test_hat_is_transpose_delegation(ex2_3):
    a = hat_supporting_weight(ex2_3)
    b = supporting_weight(transpose(ex2_3))
    assert a.alpha == b.alpha
    np.testing.assert_array_equal(a.primal.values, b.primal.values)


@pytest.mark.parametrize("seed", range(10))
def test_cross_dual_values_random(seed):
    rng = np.random.default_rng(seed)
    fs = random_set(rng, rows=5, cols=3)
    assert hat_supporting_weight(fs).alpha == pytest.approx(covering_weight(fs).alpha, abs=1e-8)
    fs = random_set(rng, rows=3, cols=5)
    assert hat_covering_weight(fs).alpha == pytest.approx(supporting_weight(fs).alpha, abs=1e-8)


def test_tableau_dual_is_optimal_for_the_dual_problem():
    rng = np.random.default_rng(3)
    for _ in range(20):
        fs = random_set(rng)
        sup = supporting_weight(fs)
        # dual of the supporting problem is a hat covering weight
        assert (sup.dual.values @ fs.matrix).max() == pytest.approx(sup.alpha, abs=1e-9)
        cov = covering_weight(fs)
        assert (cov.dual.values @ fs.matrix).min() == pytest.approx(cov.alpha, abs=1e-9)


class TestVerify:
    def test_example2_clean(self, ex2_3):
        r = verify_theorem3(ex2_3)
        assert r.gap == 0.0 or r.gap < 1e-15
        assert r.slackness_violations == []
        assert r.ok

    def test_example1_gap_zero(self, ex1_2x2):
        r = verify_theorem3(ex1_2x2)
        assert r.gap == 0.0
        assert r.ok

    def test_random_suite(self):
        rng = np.random.default_rng(2024)
        for _ in range(200):
            r = verify_theorem3(random_set(rng))
            assert r.max_violation <= 1e-7
            assert r.gap <= 1e-8

    def test_reports_violations_instead_of_raising(self, ex2_3, monkeypatch):
        import relweights.weights as W

        real = W.covering_weight

        def broken(fs, backend=None):
            w = real(fs, backend)
            return W.WeightSolution(w.kind, w.alpha + 0.25, w.primal, w.dual)

        monkeypatch.setattr(W, "covering_weight", broken)
        r = W.verify_theorem3(ex2_3)
        assert not r.ok
        assert r.gap == pytest.approx(0.25)
        assert any(label.startswith("cover_") for label, _ in r.slackness_violations)

    def test_concurrent_workers_same_result(self):
        fs = random_set(np.random.default_rng(5), rows=6, cols=7)
        a = verify_theorem3(fs, workers=1)
        b = verify_theorem3(fs, workers=4)
        assert (a.alpha_primal, a.alpha_cover, a.gap) == (b.alpha_primal, b.alpha_cover, b.gap)


def test_example2_continuum_face_has_zero_at_v0():
    fs = example2([3, 1, 2])
    w = covering_weight(fs)
    assert w.alpha == pytest.approx(1 / 3, abs=1e-12)
    assert w.primal["v0"] == 0.0
    # every member reaches alpha: private masses each equal 1/|M|
    np.testing.assert_allclose(fs.matrix @ w.primal.values, 1 / 3, atol=1e-12)
