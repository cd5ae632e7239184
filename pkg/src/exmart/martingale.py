"""Martingale state over a p-value stream.

``AdditiveMartingale`` keeps S_n = sum of bets (S_0 = 0) plus a ring buffer
of recent S values for the windowed tests. ``MultiplicativeMartingale``
tracks log S_n (S_0 = 1), per epsilon for the mixture.
"""

from __future__ import annotations

import math
from collections import deque
from itertools import islice
from typing import Deque, Optional, Tuple

import numpy as np

from .beta_stats import BetaEstimator, BetaParams
from .betting import BettingSpec, mixture_power_log_value, power_bet


class AdditiveMartingale:
    kind = "additive"

    def __init__(self, capacity: int = 2):
        self.capacity = max(int(capacity), 2)
        self.reset()

    def reset(self) -> None:
        self.n = 0
        self.value = 0.0
        self.trace: Deque[float] = deque([0.0], maxlen=self.capacity)
        self.clipped = 0
        self.clipped_mass = 0.0

    def add(self, increment: float) -> None:
        self.n += 1
        self.value += increment
        self.trace.append(self.value)

    def step(self, p: float, spec: BettingSpec, params_source: Optional[BetaEstimator] = None,
             bound: Optional[float] = None) -> Tuple[float, Optional[BetaParams]]:
        """Bet on ``p``, then fold ``p`` into ``params_source``.

        The bet reads the Beta fit of earlier p-values only. With ``bound``
        the increment is clipped to [-bound, bound] and the removed mass is
        tallied in ``clipped`` / ``clipped_mass``.
        Returns ``(increment, params used for the bet)``.
        """
        if not spec.additive:
            raise ValueError(f"{spec.family!r} is not an additive betting family")
        params = params_source.params() if params_source is not None else None
        inc = spec.bet(p, params)
        if bound is not None and abs(inc) > bound:
            clipped = math.copysign(bound, inc)
            self.clipped += 1
            self.clipped_mass += abs(inc - clipped)
            inc = clipped
        self.add(inc)
        if params_source is not None:
            params_source.update(p)
        return inc, params

    def window_delta(self, W: int) -> float:
        """S_n - S_{n-W}; during warm-up the base is S_0 = 0."""
        tr = self.trace
        base = tr[-W - 1] if len(tr) > W else tr[0]
        return tr[-1] - base

    def window_max_abs(self, W: int) -> float:
        """max |S_k - S_{n-W}| over the last W steps (partial sums re-based at window start)."""
        tr = self.trace
        k = min(W, len(tr) - 1)
        if k == 0:
            return 0.0
        start = len(tr) - k - 1
        base = tr[start]
        return max(abs(s - base) for s in islice(tr, start + 1, None))


class MultiplicativeMartingale:
    """log S_n for power (single epsilon) or mixture-of-powers betting."""

    def __init__(self, spec: BettingSpec):
        if spec.additive:
            raise ValueError(f"{spec.family!r} is not a multiplicative betting family")
        self.spec = spec
        self.kind = "mixture_power" if spec.family == "mixture" else "multiplicative_log"
        if spec.family == "mixture":
            self.eps, self.weights = spec.grid()
        else:
            self.eps, self.weights = np.array([spec.epsilon]), np.ones(1)
        self.reset()

    def reset(self) -> None:
        self.n = 0
        self.log_products = np.zeros(self.eps.size)

    def step(self, p: float) -> float:
        """Advance one step; returns the change in log S."""
        before = self.value
        for k, e in enumerate(self.eps):
            self.log_products[k] += math.log(power_bet(p, float(e)))
        self.n += 1
        return self.value - before

    @property
    def value(self) -> float:
        if self.kind == "multiplicative_log":
            return float(self.log_products[0])
        return mixture_power_log_value(self.log_products, self.weights)


def additive_step(state: AdditiveMartingale, p: float, spec: BettingSpec,
                  params_source: Optional[BetaEstimator] = None,
                  bound: Optional[float] = None) -> Tuple[AdditiveMartingale, float]:
    inc, _ = state.step(p, spec, params_source, bound)
    return state, inc


def multiplicative_log_step(state: MultiplicativeMartingale, p: float) -> MultiplicativeMartingale:
    state.step(p)
    return state


def window_delta(state: AdditiveMartingale, W: int) -> float:
    return state.window_delta(W)


def window_max_abs(state: AdditiveMartingale, W: int) -> float:
    return state.window_max_abs(W)
