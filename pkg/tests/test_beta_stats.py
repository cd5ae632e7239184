import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import integrate, stats

from exmart.beta_stats import (BetaEstimator, BetaParams, CumStats, WindowStats, beta_pdf,
                               fit_beta, welford_update, window_update)


def batch(values):
    v = np.asarray(values, dtype=float)
    return v.mean(), float(np.sum((v - v.mean()) ** 2))


def test_welford_examples():
    s = welford_update(CumStats(), 0.7)
    assert (s.n, s.mean, s.M) == (1, 0.7, 0.0)
    s = welford_update(welford_update(CumStats(), 0.2), 0.4)
    assert s.mean == pytest.approx(0.3) and s.M == pytest.approx(0.02)
    s = welford_update(s, 0.6)
    assert s.mean == pytest.approx(0.4) and s.M == pytest.approx(0.08) and s.variance == pytest.approx(0.04)


@settings(max_examples=50, deadline=None)
@given(st.lists(st.floats(0, 1), min_size=1, max_size=300))
def test_welford_matches_batch(values):
    s = CumStats()
    for k, p in enumerate(values, 1):
        s = welford_update(s, p)
        mean, M = batch(values[:k])
        assert s.mean == pytest.approx(mean, abs=1e-10)
        assert s.M == pytest.approx(M, abs=1e-10)
        assert s.M >= 0


def test_window_examples():
    w = WindowStats.from_values(2, [0.2, 0.4])
    assert w.mean == pytest.approx(0.3)
    w2 = window_update(w, 0.6)
    assert w2.mean == pytest.approx(0.5) and w2.buffer == (0.4, 0.6)
    assert w2.M == pytest.approx(batch([0.4, 0.6])[1], abs=1e-15)
    same = window_update(w, 0.2)
    assert same.mean == pytest.approx(w.mean, abs=1e-15) and same.M == pytest.approx(w.M, abs=1e-15)


def test_window_random_stream():
    rng = np.random.default_rng(0)
    p = rng.random(1000)
    w = WindowStats.from_values(50, p[:50])
    for n in range(50, 1000):
        w = window_update(w, p[n])
        mean, M = batch(p[n - 49: n + 1])
        assert abs(w.mean - mean) < 1e-10 and abs(w.M - M) < 1e-10


def test_window_warmup_through_update():
    w = WindowStats.from_values(5, [])
    for x in [0.1, 0.9, 0.3]:
        w = window_update(w, x)
    assert w.n == 3 and w.mean == pytest.approx(np.mean([0.1, 0.9, 0.3]))
    with pytest.raises(ValueError):
        WindowStats.from_values(1, [])


@pytest.mark.parametrize("mean, var, expected", [
    (0.5, 1 / 12, (1.0, 1.0)),
    (0.5, 0.05, (2.0, 2.0)),
    (0.2, 0.01, (3.0, 12.0)),
])
def test_fit_beta_examples(mean, var, expected):
    b = fit_beta(mean, var)
    assert (b.alpha, b.beta) == pytest.approx(expected, rel=1e-12)
    assert not b.degenerate


@pytest.mark.parametrize("mean, var", [(0.5, 0.25), (0.5, 0.3), (0.5, 0.0), (0.0, 0.1), (1.0, 0.1)])
def test_fit_beta_fallback(mean, var):
    b = fit_beta(mean, var)
    assert (b.alpha, b.beta) == (1.0, 1.0) and b.degenerate


def test_fit_beta_clamped():
    b = fit_beta(0.5, 1e-9)
    assert b.alpha == b.beta == 1e3
    b = fit_beta(1e-7, 1e-8)
    assert b.alpha == 1e-3


def test_beta_params_validated():
    with pytest.raises(ValueError):
        BetaParams(0.0, 1.0)


@pytest.mark.parametrize("a, b", [(1, 1), (2, 2), (2, 5), (0.5, 0.5), (0.3, 3), (30, 70), (100, 100), (1, 7)])
def test_beta_pdf_against_scipy(a, b):
    xs = np.linspace(0.001, 0.999, 41)
    ours = np.array([beta_pdf(x, BetaParams(a, b)) for x in xs])
    ref = stats.beta.pdf(xs, a, b)
    mask = ref > 1e-250
    np.testing.assert_allclose(ours[mask], ref[mask], rtol=1e-10)


def test_beta_pdf_examples():
    assert beta_pdf(0.37, BetaParams(1, 1)) == 1.0
    assert beta_pdf(0.5, BetaParams(2, 2)) == pytest.approx(1.5, rel=1e-12)
    val, _ = integrate.quad(lambda x: beta_pdf(x, BetaParams(2, 5)), 0, 1, epsabs=1e-12)
    assert abs(val - 1.0) < 1e-8


def test_beta_pdf_edges():
    assert beta_pdf(0.0, BetaParams(2, 2)) == 0.0
    assert beta_pdf(1.0, BetaParams(2, 1)) == pytest.approx(2.0)
    assert beta_pdf(0.0, BetaParams(1, 3)) == pytest.approx(3.0)
    assert beta_pdf(0.0, BetaParams(0.5, 0.5)) == pytest.approx(stats.beta.pdf(1e-6, 0.5, 0.5))
    assert beta_pdf(1.0, BetaParams(2, 0.5)) == pytest.approx(stats.beta.pdf(1 - 1e-6, 2, 0.5))
    assert np.isfinite(beta_pdf(0.0, BetaParams(1e-3, 1e-3)))


@pytest.mark.parametrize("a", [1, 2, 3, 5])
@pytest.mark.parametrize("b", [1, 2, 3, 5])
def test_fit_beta_exact_moments(a, b):
    mean = a / (a + b)
    var = a * b / ((a + b) ** 2 * (a + b + 1))
    fit = fit_beta(mean, var)
    assert fit.alpha == pytest.approx(a, abs=1e-9) and fit.beta == pytest.approx(b, abs=1e-9)


def test_estimator_window_and_cumulative():
    rng = np.random.default_rng(3)
    p = rng.beta(2, 5, 500)
    win, cum = BetaEstimator(50, "window"), BetaEstimator(mode="cumulative")
    assert win.params() == BetaParams(1, 1)
    for k, x in enumerate(p, 1):
        win.update(x)
        cum.update(x)
        m, M = batch(p[max(0, k - 50):k])
        assert win.mean == pytest.approx(m, abs=1e-10) and win.M == pytest.approx(M, abs=1e-10)
    tail = p[-50:]
    for est, vals in ((win, tail), (cum, p)):
        got, want = est.params(), fit_beta(vals.mean(), vals.var(ddof=1))
        assert (got.alpha, got.beta) == pytest.approx((want.alpha, want.beta), rel=1e-8)
    with pytest.raises(ValueError):
        BetaEstimator(10, "kde")
