"""Online Beta-density estimation of the p-value distribution.

Running moments come from Welford's recursion (cumulative) or its
sliding-window analogue; shape parameters follow by moment matching.
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass, field
from typing import Deque, Literal, Optional

SHAPE_MIN = 1e-3
SHAPE_MAX = 1e3
EDGE = 1e-6


@dataclass(frozen=True)
class BetaParams:
    alpha: float = 1.0
    beta: float = 1.0
    # Set when moment matching fell back to the uniform (1, 1).
    degenerate: bool = field(default=False, compare=False)

    def __post_init__(self):
        if not (self.alpha > 0 and self.beta > 0):
            raise ValueError(f"Beta shapes must be positive, got ({self.alpha}, {self.beta})")


UNIFORM = BetaParams(1.0, 1.0)


@dataclass(frozen=True)
class CumStats:
    n: int = 0
    mean: float = 0.0
    M: float = 0.0

    @property
    def variance(self) -> float:
        return self.M / (self.n - 1) if self.n >= 2 else 0.0


@dataclass(frozen=True)
class WindowStats:
    W: int
    buffer: tuple
    mean: float
    M: float

    @property
    def n(self) -> int:
        return len(self.buffer)

    @property
    def variance(self) -> float:
        return self.M / (self.n - 1) if self.n >= 2 else 0.0

    @classmethod
    def from_values(cls, W: int, values) -> "WindowStats":
        """Warm up with Welford over the first (at most W) values."""
        if W < 2:
            raise ValueError("window size must be at least 2")
        stats = CumStats()
        values = tuple(values)[-W:]
        for p in values:
            stats = welford_update(stats, p)
        return cls(W, values, stats.mean, stats.M)


def welford_update(stats: CumStats, p: float) -> CumStats:
    n = stats.n + 1
    mean = stats.mean + (p - stats.mean) / n
    M = stats.M + (p - stats.mean) * (p - mean)
    return CumStats(n, mean, M)


def window_update(stats: WindowStats, p_new: float) -> WindowStats:
    """Slide a full window by one value using the closed-form recursions."""
    if stats.n < stats.W:
        buf = stats.buffer + (p_new,)
        cum = welford_update(CumStats(stats.n, stats.mean, stats.M), p_new)
        return WindowStats(stats.W, buf, cum.mean, cum.M)
    p_old = stats.buffer[0]
    mean = stats.mean + (p_new - p_old) / stats.W
    M = stats.M + (p_new + p_old - mean - stats.mean) * (p_new - p_old)
    return WindowStats(stats.W, stats.buffer[1:] + (p_new,), mean, max(M, 0.0))


def fit_beta(mean: float, variance: float) -> BetaParams:
    """Method-of-moments Beta shapes, clamped to [1e-3, 1e3].

    Falls back to the uniform (1, 1), flagged ``degenerate``, when the
    moments admit no Beta distribution.
    """
    if not (0.0 < mean < 1.0) or not variance > 0.0:
        return BetaParams(1.0, 1.0, degenerate=True)
    factor = mean * (1.0 - mean) / variance - 1.0
    if not factor > 0.0:
        return BetaParams(1.0, 1.0, degenerate=True)
    a = min(max(mean * factor, SHAPE_MIN), SHAPE_MAX)
    b = min(max((1.0 - mean) * factor, SHAPE_MIN), SHAPE_MAX)
    return BetaParams(a, b)


def log_beta_fn(a: float, b: float) -> float:
    return math.lgamma(a) + math.lgamma(b) - math.lgamma(a + b)


def beta_pdf(x: float, params: BetaParams) -> float:
    """Beta density, evaluated in log space.

    Where the density is unbounded (a shape below 1) the endpoints 0 and 1
    are moved inward to 1e-6 and 1 - 1e-6.
    """
    a, b = params.alpha, params.beta
    if x < 0.0 or x > 1.0:
        return 0.0
    if a < 1.0 and x <= 0.0:
        x = EDGE
    elif b < 1.0 and x >= 1.0:
        x = 1.0 - EDGE
    log_pdf = -log_beta_fn(a, b)
    if a != 1.0:
        if x == 0.0:
            return 0.0
        log_pdf += (a - 1.0) * math.log(x)
    if b != 1.0:
        if x == 1.0:
            return 0.0
        log_pdf += (b - 1.0) * math.log1p(-x)
    return math.exp(log_pdf)


class BetaEstimator:
    """Running Beta fit over the p-value stream.

    ``mode="window"`` matches moments over the last ``W`` p-values,
    ``mode="cumulative"`` over all of them. :meth:`params` reflects only the
    values passed to :meth:`update` so far.
    """

    def __init__(self, W: int = 100, mode: Literal["window", "cumulative"] = "window"):
        if mode not in ("window", "cumulative"):
            raise ValueError(f"unknown estimation mode {mode!r}")
        if mode == "window" and W < 2:
            raise ValueError("window size must be at least 2")
        self.W = W
        self.mode = mode
        self.n = 0
        self.mean = 0.0
        self.M = 0.0
        self._buf: Deque[float] = deque()
        self._params: Optional[BetaParams] = UNIFORM

    def update(self, p: float) -> None:
        if self.mode == "window" and self.n >= self.W:
            p_old = self._buf.popleft()
            mean = self.mean + (p - p_old) / self.W
            self.M = max(self.M + (p + p_old - mean - self.mean) * (p - p_old), 0.0)
            self.mean = mean
        else:
            self.n += 1
            mean = self.mean + (p - self.mean) / self.n
            self.M += (p - self.mean) * (p - mean)
            self.mean = mean
        if self.mode == "window":
            self._buf.append(p)
        self._params = None

    @property
    def count(self) -> int:
        return self.n

    @property
    def variance(self) -> float:
        return self.M / (self.n - 1) if self.n >= 2 else 0.0

    def params(self) -> BetaParams:
        if self._params is None:
            self._params = fit_beta(self.mean, self.variance) if self.n >= 2 else UNIFORM
        return self._params
