"""Single-pass detector wiring samples to alarms.

Per step: nonconformity score -> conformal p-value -> bet (using the Beta fit
of earlier p-values) -> martingale update -> fold p into the Beta fit ->
alarm test.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import List, Literal, Optional

import numpy as np

from .beta_stats import BetaEstimator
from .betting import BettingSpec
from .conformal import FullConformal, InductiveConformal, TieBreaker
from .detector import Alarm, DetectorConfig, step_decision
from .martingale import AdditiveMartingale, MultiplicativeMartingale

Mode = Literal["inductive", "full"]


@dataclass(frozen=True)
class StepRecord:
    step: int
    p_value: float
    increment: float
    martingale: float
    alpha_hat: float
    beta_hat: float
    alarm: Optional[Alarm] = None


class MartingaleTracker:
    """Everything downstream of the p-value for one betting spec."""

    def __init__(self, betting: BettingSpec, detector: DetectorConfig = DetectorConfig(),
                 beta_mode: str = "window"):
        if detector.test == "doob" and not betting.centered_linear:
            raise ValueError("the Doob test is only valid with the odd bet f(p) = 1/2 - p")
        self.betting = betting
        self.detector = detector
        self.beta = BetaEstimator(detector.window, beta_mode)
        self.bound = detector.resolved_bound(betting.family)
        if betting.additive:
            self.martingale = AdditiveMartingale(detector.window + 1)
        else:
            self.martingale = MultiplicativeMartingale(betting)
        self.step_count = 0
        self.halted = False
        self.alarms: List[Alarm] = []

    def step(self, p: float) -> StepRecord:
        self.step_count += 1
        m = self.martingale
        if isinstance(m, AdditiveMartingale):
            inc, params = m.step(p, self.betting, self.beta, self.bound)
        else:
            params = self.beta.params()
            inc = m.step(p)
            self.beta.update(p)
        value = m.value
        alarm = None
        if isinstance(m, AdditiveMartingale) and not self.halted:
            alarm = step_decision(self.detector, m, self.step_count, self.bound)
            if alarm is not None:
                self.alarms.append(alarm)
                if self.detector.continue_after_alarm:
                    m.reset()
                else:
                    self.halted = True
        return StepRecord(self.step_count, p, inc, value, params.alpha, params.beta, alarm)


class StreamDetector:
    """Consumes raw samples and emits one :class:`StepRecord` per post-training sample.

    In inductive mode the first ``train_size`` samples form the fixed
    training set and produce no record.
    """

    def __init__(self, betting: BettingSpec, detector: DetectorConfig = DetectorConfig(),
                 mode: Mode = "inductive", train_size: int = 200, seed: int = 0,
                 beta_mode: str = "window", denominator_mode: str = "m+1"):
        if mode not in ("inductive", "full"):
            raise ValueError(f"unknown p-value mode {mode!r}")
        if mode == "inductive" and train_size < 2:
            raise ValueError("inductive mode needs train_size >= 2")
        self.mode = mode
        self.train_size = train_size
        self.denominator_mode = denominator_mode
        self.tie = TieBreaker(seed)
        self.tracker = MartingaleTracker(betting, detector, beta_mode)
        self._training: list = []
        self.conformal = FullConformal(self.tie) if mode == "full" else None

    @property
    def alarms(self) -> List[Alarm]:
        return self.tracker.alarms

    def fit(self, training) -> "StreamDetector":
        self.conformal = InductiveConformal(training, self.tie,
                                            denominator_mode=self.denominator_mode)
        return self

    def update(self, z) -> Optional[StepRecord]:
        if self.conformal is None:
            self._training.append(np.atleast_1d(np.asarray(z, dtype=float)))
            if len(self._training) == self.train_size:
                self.fit(np.vstack(self._training))
                self._training = []
            return None
        return self.tracker.step(self.conformal.update(z))

    def run(self, samples) -> List[StepRecord]:
        out = []
        for z in samples:
            rec = self.update(z)
            if rec is not None:
                out.append(rec)
        return out
