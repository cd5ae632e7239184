"""Alarm rules for the additive martingale.

Two windowed tests are offered. The Hoeffding-Azuma test alarms when the
martingale moves by more than ``b * sqrt(2 W ln(2/alpha))`` within the last
W steps, where ``b`` bounds the absolute bet. The Doob-Kolmogorov test
alarms when the re-based partial sums in the window leave
``sqrt(W / (12 alpha))``, a bound derived for the bet ``f(p) = 1/2 - p``.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass
from typing import Literal, Optional

from .martingale import AdditiveMartingale

Test = Literal["azuma", "doob"]

# Increment bounds used when the config leaves ``bound`` unset.
DEFAULT_BOUND = {"odd": 1.0, "plugin": 3.0}


@dataclass(frozen=True)
class DetectorConfig:
    alpha: float = 0.05
    window: int = 100
    test: Test = "azuma"
    bound: Optional[float] = None
    continue_after_alarm: bool = False

    def __post_init__(self):
        if not 0.0 < self.alpha < 1.0:
            raise ValueError(f"significance alpha must lie in (0, 1), got {self.alpha}")
        if int(self.window) != self.window or self.window < 2:
            raise ValueError(f"window must be an integer >= 2, got {self.window}")
        if self.test not in ("azuma", "doob"):
            raise ValueError(f"unknown test {self.test!r}")
        if self.bound is not None and not self.bound > 0.0:
            raise ValueError(f"increment bound must be positive, got {self.bound}")

    def resolved_bound(self, family: str) -> float:
        if self.bound is not None:
            return float(self.bound)
        return DEFAULT_BOUND.get(family, 1.0)


@dataclass(frozen=True)
class Alarm:
    step: int
    statistic: float
    threshold: float
    test: str

    def __post_init__(self):
        if not self.statistic > self.threshold:
            raise ValueError("an alarm requires statistic > threshold")

    def to_dict(self) -> dict:
        return asdict(self)


def azuma_threshold(W: float, alpha: float, bound: float = 1.0) -> float:
    return bound * math.sqrt(2.0 * W * math.log(2.0 / alpha))


def doob_threshold(W: float, alpha: float) -> float:
    return math.sqrt(W / (12.0 * alpha))


def cumulative_azuma_test(S_m: float, m: int, alpha: float, bound: float = 1.0) -> bool:
    return abs(S_m) > azuma_threshold(m, alpha, bound)


def step_decision(config: DetectorConfig, state: AdditiveMartingale, step: int,
                  bound: float = 1.0) -> Optional[Alarm]:
    """Alarm for ``step`` if the configured windowed test rejects, else None.

    The Azuma window is ``min(steps since start or reset, W)``.
    """
    W = config.window
    if config.test == "azuma":
        stat = abs(state.window_delta(W))
        thr = azuma_threshold(min(state.n, W), config.alpha, bound)
    else:
        stat = state.window_max_abs(W)
        thr = doob_threshold(W, config.alpha)
    if stat > thr:
        return Alarm(step, stat, thr, config.test)
    return None
