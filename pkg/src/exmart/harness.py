"""Synthetic change-point scenarios and end-to-end experiment runs."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import List, Optional, Sequence, Tuple

import numpy as np

from .betting import BettingSpec
from .conformal import FullConformal, InductiveConformal, TieBreaker
from .detector import Alarm, DetectorConfig
from .stream import MartingaleTracker, StepRecord

# Keeps the data generator's bit stream distinct from the tie breaker's.
_STREAM_TAG = 0xE5


@dataclass(frozen=True)
class ScenarioSpec:
    """Gaussian stream whose mean jumps after ``n_pre`` samples.

    Pre-change samples are N(pre_mean, I). Post-change samples are
    N(pre_mean + shift, post_cov), with ``post_cov = I`` by default.
    """

    n_pre: int = 700
    n_post: int = 500
    dim: int = 1
    shift: Tuple[float, ...] = (2.0,)
    seed: int = 0
    pre_mean: Optional[Tuple[float, ...]] = None
    post_cov: Optional[Tuple[Tuple[float, ...], ...]] = None

    def __post_init__(self):
        if self.n_pre < 0 or self.n_post < 0:
            raise ValueError("stream lengths must be non-negative")
        if self.dim < 1:
            raise ValueError("dim must be >= 1")
        shift = np.atleast_1d(np.asarray(self.shift, dtype=float))
        if shift.size == 1 and self.dim > 1:
            shift = np.full(self.dim, shift[0])
        if shift.shape != (self.dim,):
            raise ValueError(f"shift must have {self.dim} entries, got {shift.size}")
        object.__setattr__(self, "shift", tuple(float(s) for s in shift))
        if self.pre_mean is not None and len(self.pre_mean) != self.dim:
            raise ValueError(f"pre_mean must have {self.dim} entries")
        if self.post_cov is not None:
            cov = np.asarray(self.post_cov, dtype=float)
            if cov.shape != (self.dim, self.dim):
                raise ValueError(f"post_cov must be {self.dim}x{self.dim}")
            np.linalg.cholesky(cov)  # raises unless positive definite
        if int(self.seed) < 0:
            raise ValueError("seed must be non-negative")

    @property
    def length(self) -> int:
        return self.n_pre + self.n_post


def heat_pump_like_scenario(seed: int = 0, n_pre: int = 700, n_post: int = 500) -> ScenarioSpec:
    """3-D stream with a joint mean shift and correlated variance inflation after the change."""
    cov = ((2.0, 0.9, 0.5),
           (0.9, 1.5, 0.4),
           (0.5, 0.4, 1.2))
    return ScenarioSpec(n_pre=n_pre, n_post=n_post, dim=3, shift=(1.5, -1.0, 0.8),
                        seed=seed, post_cov=cov)


def generate_stream(spec: ScenarioSpec) -> np.ndarray:
    rng = np.random.default_rng([_STREAM_TAG, int(spec.seed)])
    d = spec.dim
    mean = np.zeros(d) if spec.pre_mean is None else np.asarray(spec.pre_mean, dtype=float)
    pre = rng.standard_normal((spec.n_pre, d)) + mean
    post = rng.standard_normal((spec.n_post, d))
    if spec.post_cov is not None:
        post = post @ np.linalg.cholesky(np.asarray(spec.post_cov, dtype=float)).T
    post = post + mean + np.asarray(spec.shift)
    return np.vstack([pre, post])


def conformal_pvalues(samples: np.ndarray, mode: str = "inductive", train_size: int = 200,
                      seed: int = 0, denominator_mode: str = "m+1") -> np.ndarray:
    """p-values for ``samples``; in inductive mode the first ``train_size`` rows are training."""
    tie = TieBreaker(seed)
    if mode == "full":
        conf = FullConformal(tie)
        return np.array([conf.update(z) for z in samples])
    if mode != "inductive":
        raise ValueError(f"unknown p-value mode {mode!r}")
    conf = InductiveConformal(samples[:train_size], tie, denominator_mode=denominator_mode)
    return np.array([conf.update(z) for z in samples[train_size:]])


@dataclass
class RunTrace:
    records: List[StepRecord]
    change_step: int
    betting: BettingSpec = field(default_factory=BettingSpec)

    def __len__(self) -> int:
        return len(self.records)

    def column(self, name: str) -> np.ndarray:
        return np.array([getattr(r, name) for r in self.records], dtype=float)

    @property
    def p_values(self) -> np.ndarray:
        return self.column("p_value")

    @property
    def increments(self) -> np.ndarray:
        return self.column("increment")

    @property
    def martingale(self) -> np.ndarray:
        return self.column("martingale")

    @property
    def alarm_flags(self) -> np.ndarray:
        return np.array([r.alarm is not None for r in self.records])

    @property
    def alarms(self) -> List[Alarm]:
        return [r.alarm for r in self.records if r.alarm is not None]

    def first_alarm(self) -> Optional[int]:
        a = self.alarms
        return a[0].step if a else None

    @property
    def peak_post_change(self) -> float:
        post = self.martingale[self.change_step:]
        return float(post.max()) if post.size else float("nan")

    @property
    def pre_change_variance(self) -> float:
        pre = self.martingale[: self.change_step]
        return float(pre.var()) if pre.size > 1 else 0.0


def _trace(pvalues: Sequence[float], betting: BettingSpec, detector: DetectorConfig,
           change_step: int, beta_mode: str) -> RunTrace:
    tracker = MartingaleTracker(betting, detector, beta_mode)
    return RunTrace([tracker.step(float(p)) for p in pvalues], change_step, betting)


def _check(scenario: ScenarioSpec, mode: str, train_size: int) -> int:
    if mode == "inductive":
        if train_size >= scenario.n_pre:
            raise ValueError(
                f"training size {train_size} must be below the pre-change length {scenario.n_pre}")
        return scenario.n_pre - train_size
    return scenario.n_pre


def run_experiment(scenario: ScenarioSpec, detector: DetectorConfig = DetectorConfig(),
                   betting: BettingSpec = BettingSpec(), mode: str = "inductive",
                   train_size: int = 200, beta_mode: str = "window",
                   denominator_mode: str = "m+1") -> RunTrace:
    """Generate the scenario stream and run one detector over it.

    ``RunTrace.change_step`` counts the pre-change steps in the trace, so
    ``records[change_step]`` is the first post-change sample.
    """
    change_step = _check(scenario, mode, train_size)
    samples = generate_stream(scenario)
    p = conformal_pvalues(samples, mode, train_size, scenario.seed, denominator_mode)
    return _trace(p, betting, detector, change_step, beta_mode)


@dataclass
class Comparison:
    betting: BettingSpec
    trace: RunTrace
    peak_post_change: float
    pre_change_variance: float


def compare_martingales(scenario: ScenarioSpec, specs: Sequence[BettingSpec],
                        detector: DetectorConfig = DetectorConfig(), mode: str = "inductive",
                        train_size: int = 200, beta_mode: str = "window") -> List[Comparison]:
    """Run several betting specs over one shared p-value stream."""
    change_step = _check(scenario, mode, train_size)
    p = conformal_pvalues(generate_stream(scenario), mode, train_size, scenario.seed)
    out = []
    for spec in specs:
        tr = _trace(p, spec, detector, change_step, beta_mode)
        out.append(Comparison(spec, tr, tr.peak_post_change, tr.pre_change_variance))
    return out
