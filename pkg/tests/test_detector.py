import math

import numpy as np
import pytest

from exmart.betting import BettingSpec
from exmart.detector import (Alarm, DetectorConfig, azuma_threshold, cumulative_azuma_test,
                             doob_threshold, step_decision)
from exmart.martingale import AdditiveMartingale
from exmart.stream import MartingaleTracker


def test_azuma_closed_form():
    assert azuma_threshold(100, 0.05) == pytest.approx(math.sqrt(200 * math.log(40)), rel=1e-15)
    assert azuma_threshold(50, 0.05) == pytest.approx(19.21, abs=5e-3)
    assert azuma_threshold(100, 2.0) == 0.0
    assert azuma_threshold(100, 0.05, bound=3) == pytest.approx(3 * azuma_threshold(100, 0.05))


def test_doob_closed_form():
    assert doob_threshold(12, 1.0) == 1.0
    assert doob_threshold(100, 0.05) == pytest.approx(12.9099, abs=1e-4)
    for W in (2, 17, 100):
        assert doob_threshold(2 * W, 0.05) / doob_threshold(W, 0.05) == pytest.approx(math.sqrt(2), abs=1e-12)


def test_thresholds_monotone():
    Ws = [2, 5, 10, 20, 50, 100, 200, 500, 1000, 5000]
    alphas = [0.001, 0.005, 0.01, 0.02, 0.05, 0.1, 0.2, 0.3, 0.5, 0.9]
    for f in (azuma_threshold, doob_threshold):
        T = np.array([[f(W, a) for a in alphas] for W in Ws])
        assert np.all(np.diff(T, axis=0) > 0)
        assert np.all(np.diff(T, axis=1) < 0)


def test_cumulative_test():
    assert not cumulative_azuma_test(0.0, 100, 0.05)
    assert cumulative_azuma_test(30.0, 100, 0.05)
    assert not cumulative_azuma_test(27.0, 100, 0.05)
    assert cumulative_azuma_test(-30.0, 100, 0.05)


def test_config_validation():
    for kw in ({"alpha": 0.0}, {"alpha": 1.0}, {"window": 1}, {"test": "cusum"}, {"bound": 0.0}):
        with pytest.raises(ValueError):
            DetectorConfig(**kw)
    assert DetectorConfig().resolved_bound("odd") == 1.0
    assert DetectorConfig().resolved_bound("plugin") == 3.0
    assert DetectorConfig(bound=2.0).resolved_bound("plugin") == 2.0


def test_alarm_requires_exceedance():
    with pytest.raises(ValueError):
        Alarm(1, 1.0, 1.0, "azuma")


def test_zero_increments_never_alarm():
    cfg = DetectorConfig()
    m = AdditiveMartingale(cfg.window + 1)
    for n in range(1, 500):
        m.add(0.0)
        assert step_decision(cfg, m, n) is None
        assert step_decision(DetectorConfig(test="doob"), m, n) is None


def test_pinned_pvalues_alarm_quickly():
    cfg = DetectorConfig(alpha=0.05, window=100)
    tr = MartingaleTracker(BettingSpec("odd"), cfg)
    first = next(r.step for r in (tr.step(0.0) for _ in range(200)) if r.alarm is not None)
    # delta 0.5 k against sqrt(2 k ln 40): crossing at k = 30, well before 0.5 W = 55
    assert first == 30
    assert first <= 55


def test_doob_needs_centered_linear_bet():
    with pytest.raises(ValueError):
        MartingaleTracker(BettingSpec("plugin"), DetectorConfig(test="doob"))
    with pytest.raises(ValueError):
        MartingaleTracker(BettingSpec("odd", g=np.sin), DetectorConfig(test="doob"))
    tr = MartingaleTracker(BettingSpec("odd"), DetectorConfig(test="doob", window=20))
    alarms = [r.alarm for r in (tr.step(0.0) for _ in range(40)) if r.alarm is not None]
    assert alarms[0].threshold == pytest.approx(doob_threshold(20, 0.05))


def test_halt_and_continue():
    halt = MartingaleTracker(BettingSpec("odd"), DetectorConfig(window=50))
    recs = [halt.step(0.0) for _ in range(100)]
    assert len(halt.alarms) == 1 and halt.halted
    assert recs[-1].martingale == 50.0  # trace keeps running after the latch
    cont = MartingaleTracker(BettingSpec("odd"), DetectorConfig(window=50, continue_after_alarm=True))
    for _ in range(100):
        cont.step(0.0)
    assert len(cont.alarms) > 1
    steps = [a.step for a in cont.alarms]
    assert len(set(np.diff(steps))) == 1  # reset makes alarms periodic


def test_false_alarm_rate_small():
    rng = np.random.default_rng(0)
    cfg = DetectorConfig(alpha=0.05, window=100)
    runs_with_alarm = 0
    for _ in range(100):
        tr = MartingaleTracker(BettingSpec("odd"), cfg)
        for p in rng.random(1000):
            tr.step(p)
        runs_with_alarm += bool(tr.alarms)
    assert runs_with_alarm / 100 <= 2 * 0.05
