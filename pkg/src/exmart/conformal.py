"""Conformal p-values: full (transductive) and inductive modes.

Both modes use the smoothed rank statistic

    p = (#{scores > a} + theta * #{scores == a}) / denominator

with ``theta`` uniform on [0, 1]. Under exchangeability the resulting
p-values are independent and uniform.
"""

from __future__ import annotations

from typing import Literal, Optional

import numpy as np

from .nonconformity import NearestNeighbor, as_reference, as_sample

DenominatorMode = Literal["m+1", "index"]


class TieBreaker:
    """Seeded, reproducible source of the tie-breaking draws theta."""

    _BLOCK = 512

    def __init__(self, seed: int):
        if seed is None or int(seed) < 0:
            raise ValueError("TieBreaker needs a non-negative integer seed")
        self.seed = int(seed)
        self._rng = np.random.Generator(np.random.PCG64(self.seed))
        self._buf = np.empty(0)
        self._pos = 0
        self.draws = 0

    def draw(self) -> float:
        if self._pos >= self._buf.size:
            self._buf = self._rng.random(self._BLOCK)
            self._pos = 0
        theta = float(self._buf[self._pos])
        self._pos += 1
        self.draws += 1
        return theta


def draw_theta(tie: TieBreaker) -> float:
    return tie.draw()


def _theta(tie) -> float:
    # Tests pass a bare float to pin theta.
    return float(tie) if isinstance(tie, (int, float)) else tie.draw()


def rank_pvalue(score: float, scores: np.ndarray, theta: float, denominator: float) -> float:
    scores = np.asarray(scores, dtype=float)
    greater = int(np.count_nonzero(scores > score))
    equal = int(np.count_nonzero(scores == score))
    return (greater + theta * equal) / denominator


def full_pvalue_step(history, measure=None, tie=0.5) -> float:
    """p-value of the newest sample in ``history`` by full recomputation.

    Every score is recomputed leave-one-out against the whole history, so a
    call costs O(i^2) distance evaluations. The first sample has no
    reference and gets ``p = theta``.
    """
    X = as_reference(history)
    i = X.shape[0]
    if i == 0:
        raise ValueError("history is empty")
    theta = _theta(tie)
    if i == 1:
        return theta
    measure = measure or NearestNeighbor()
    if hasattr(measure, "score_batch"):
        scores = measure.score_batch(X, X, leave_one_out=True)
    else:
        scores = np.array([measure.score(X[j], X, exclude_index=j) for j in range(i)])
    return rank_pvalue(scores[-1], scores, theta, i)


def inductive_pvalue(score: float, training_scores, tie=0.5,
                     denominator_mode: DenominatorMode = "m+1",
                     index: Optional[int] = None) -> float:
    """p-value of ``score`` against fixed training scores.

    ``"m+1"`` counts the new score among its own ties and divides by the
    training size plus one. ``"index"`` divides the training counts by the
    1-based stream ``index``, clipped to [0, 1].
    """
    training_scores = np.asarray(training_scores, dtype=float)
    m = training_scores.size
    if m == 0:
        raise ValueError("training scores are empty")
    theta = _theta(tie)
    greater = int(np.count_nonzero(training_scores > score))
    equal = int(np.count_nonzero(training_scores == score))
    if denominator_mode == "m+1":
        return (greater + theta * (equal + 1)) / (m + 1)
    if denominator_mode == "index":
        if index is None or index < 1:
            raise ValueError("denominator_mode='index' needs the 1-based stream index")
        return min(1.0, (greater + theta * equal) / index)
    raise ValueError(f"unknown denominator_mode {denominator_mode!r}")


class InductiveConformal:
    """Streaming p-values against a fixed training set.

    Training scores are computed once (leave-one-out within the training
    set) and kept sorted, so each new p-value costs one nearest-neighbor
    query plus two binary searches.
    """

    def __init__(self, training, tie: TieBreaker, measure=None,
                 denominator_mode: DenominatorMode = "m+1"):
        self.training = as_reference(training)
        if self.training.shape[0] < 2:
            raise ValueError("inductive mode needs at least 2 training samples")
        self.measure = measure or NearestNeighbor()
        self.tie = tie
        self.denominator_mode = denominator_mode
        scores = self.measure.score_batch(self.training, self.training, leave_one_out=True)
        self.training_scores = np.sort(scores)
        self.n = 0

    @property
    def dim(self) -> int:
        return self.training.shape[1]

    def score(self, z) -> float:
        return self.measure.score(z, self.training)

    def pvalue_from_score(self, a: float) -> float:
        self.n += 1
        theta = self.tie.draw()
        s = self.training_scores
        m = s.size
        lo = int(np.searchsorted(s, a, side="left"))
        hi = int(np.searchsorted(s, a, side="right"))
        greater, equal = m - hi, hi - lo
        if self.denominator_mode == "m+1":
            return (greater + theta * (equal + 1)) / (m + 1)
        return min(1.0, (greater + theta * equal) / self.n)

    def update(self, z) -> float:
        return self.pvalue_from_score(self.score(z))


class FullConformal:
    """Streaming full-conformal p-values with exact nearest-neighbor upkeep.

    Adding a sample can only shrink earlier nearest-neighbor distances, so
    the recomputed scores of every earlier sample follow from one distance
    row per step. The result equals :func:`full_pvalue_step` exactly.
    """

    def __init__(self, tie: TieBreaker, dim: Optional[int] = None):
        self.tie = tie
        self._X = np.empty((0, dim or 0))
        self._nn = np.empty(0)
        self.n = 0

    def update(self, z) -> float:
        z = as_sample(z)
        theta = self.tie.draw()
        if self.n == 0:
            self._X = np.empty((64, z.size))
            self._nn = np.empty(64)
        elif z.size != self._X.shape[1]:
            raise ValueError(
                f"dimension mismatch: sample has {z.size} features, stream has {self._X.shape[1]}")
        i = self.n
        if i == self._X.shape[0]:
            self._X = np.concatenate([self._X, np.empty_like(self._X)])
            self._nn = np.concatenate([self._nn, np.empty_like(self._nn)])
        self._X[i] = z
        self.n = i + 1
        if i == 0:
            self._nn[0] = np.inf
            return theta
        diff = self._X[:i] - z
        d = np.sqrt(np.sum(diff * diff, axis=1))
        np.minimum(self._nn[:i], d, out=self._nn[:i])
        a = d.min()
        self._nn[i] = a
        scores = self._nn[: i + 1]
        greater = int(np.count_nonzero(scores > a))
        equal = int(np.count_nonzero(scores == a))
        return (greater + theta * equal) / (i + 1)
