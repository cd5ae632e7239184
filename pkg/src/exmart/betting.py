"""Betting functions.

Multiplicative bets are non-negative and integrate to 1 over [0, 1]; their
running product is a martingale. Additive bets integrate to 0; their
running sum is a martingale.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from typing import Callable, Literal, Optional, Sequence, Tuple

import numpy as np

from .beta_stats import UNIFORM, BetaParams, beta_pdf

P_FLOOR = 1e-12

Family = Literal["power", "mixture", "odd", "plugin"]
ADDITIVE = ("odd", "plugin")
MULTIPLICATIVE = ("power", "mixture")


class ClampWarning(RuntimeWarning):
    """A p-value of exactly 0 hit the power-bet singularity and was clamped."""


def centered_linear(x: float) -> float:
    return -x


def power_bet(p: float, epsilon: float) -> float:
    if not 0.0 < epsilon <= 1.0:
        raise ValueError(f"epsilon must lie in (0, 1], got {epsilon}")
    if epsilon == 1.0:
        return 1.0
    if p <= 0.0:
        warnings.warn("p = 0 clamped to 1e-12 in power bet", ClampWarning, stacklevel=2)
        p = P_FLOOR
    return epsilon * p ** (epsilon - 1.0)


def shifted_odd_bet(p: float, g: Callable[[float], float] = centered_linear) -> float:
    return g(p - 0.5)


def plugin_bet(p: float, params: BetaParams = UNIFORM) -> float:
    return beta_pdf(p, params) - 1.0


def mixture_grid(size: int = 20) -> Tuple[np.ndarray, np.ndarray]:
    """Equally spaced epsilons k/size, k = 1..size, with trapezoid weights summing to 1."""
    if size < 1:
        raise ValueError("mixture grid needs at least one point")
    eps = np.arange(1, size + 1) / size
    if size == 1:
        return eps, np.ones(1)
    w = np.ones(size)
    w[0] = w[-1] = 0.5
    return eps, w / w.sum()


def mixture_power_log_value(log_products: Sequence[float], weights: Sequence[float]) -> float:
    """log of sum_k w_k * exp(log_products[k]), via log-sum-exp."""
    lp = np.asarray(log_products, dtype=float)
    lw = np.log(np.asarray(weights, dtype=float))
    t = lp + lw
    top = t.max()
    if not np.isfinite(top):
        return float(top)
    return float(top + np.log(np.sum(np.exp(t - top))))


def mixture_power_martingale_value(log_products: Sequence[float], weights: Sequence[float]) -> float:
    return math.exp(mixture_power_log_value(log_products, weights))


@dataclass(frozen=True)
class BettingSpec:
    """A betting family plus its parameters.

    ``odd`` uses ``g`` (default ``g(x) = -x``); ``power`` uses ``epsilon``;
    ``mixture`` uses ``grid_size`` epsilons; ``plugin`` reads live Beta
    parameters at bet time.
    """

    family: Family = "plugin"
    epsilon: float = 0.5
    grid_size: int = 20
    g: Callable[[float], float] = field(default=centered_linear, compare=False)

    def __post_init__(self):
        if self.family not in ADDITIVE + MULTIPLICATIVE:
            raise ValueError(f"unknown betting family {self.family!r}")
        if self.family == "power" and not 0.0 < self.epsilon <= 1.0:
            raise ValueError(f"epsilon must lie in (0, 1], got {self.epsilon}")
        if self.family == "mixture" and self.grid_size < 1:
            raise ValueError("mixture grid needs at least one point")

    @property
    def additive(self) -> bool:
        return self.family in ADDITIVE

    @property
    def centered_linear(self) -> bool:
        return self.family == "odd" and self.g is centered_linear

    def grid(self) -> Tuple[np.ndarray, np.ndarray]:
        return mixture_grid(self.grid_size)

    def bet(self, p: float, params: Optional[BetaParams] = None) -> float:
        if self.family == "odd":
            return shifted_odd_bet(p, self.g)
        if self.family == "plugin":
            return plugin_bet(p, params or UNIFORM)
        if self.family == "power":
            return power_bet(p, self.epsilon)
        eps, w = self.grid()
        return float(sum(wk * power_bet(p, ek) for ek, wk in zip(eps, w)))
