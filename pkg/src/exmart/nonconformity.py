"""Nonconformity measures.

A measure scores how strange a sample looks next to a reference set. The
shipped measure is the Euclidean distance to the nearest reference sample.
Samples are 1-D float arrays; reference sets are 2-D arrays ``(n, d)``.
"""

from __future__ import annotations

from typing import Callable, Dict, Optional, Protocol, Sequence

import numpy as np


class NonconformityMeasure(Protocol):
    def score(self, sample: np.ndarray, reference: np.ndarray,
              exclude_index: Optional[int] = None) -> float:
        ...


def as_sample(z) -> np.ndarray:
    """Coerce ``z`` to a finite 1-D float array (scalars become length 1)."""
    arr = np.atleast_1d(np.asarray(z, dtype=float))
    if arr.ndim != 1:
        raise ValueError(f"sample must be 1-D, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise ValueError("sample contains non-finite features")
    return arr


def as_reference(samples) -> np.ndarray:
    arr = np.asarray(samples, dtype=float)
    if arr.ndim == 1:
        arr = arr[:, None]
    if arr.ndim != 2:
        raise ValueError(f"reference must be 2-D (n, d), got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise ValueError("reference contains non-finite features")
    return arr


def _distances(z: np.ndarray, reference: np.ndarray) -> np.ndarray:
    if reference.shape[1] != z.shape[0]:
        raise ValueError(
            f"dimension mismatch: sample has {z.shape[0]} features, "
            f"reference has {reference.shape[1]}")
    diff = reference - z
    return np.sqrt(np.sum(diff * diff, axis=1))


class NearestNeighbor:
    """Distance from a sample to its nearest (non-excluded) reference sample."""

    name = "nn"

    def score(self, sample, reference, exclude_index=None) -> float:
        z = as_sample(sample)
        ref = as_reference(reference)
        d = _distances(z, ref)
        if exclude_index is not None:
            d = np.delete(d, exclude_index)
        if d.size == 0:
            raise ValueError("no reference samples")
        return float(d.min())

    def score_batch(self, samples, reference, leave_one_out: bool = False) -> np.ndarray:
        X = as_reference(samples)
        ref = as_reference(reference)
        if X.shape[1] != ref.shape[1]:
            raise ValueError(
                f"dimension mismatch: samples have {X.shape[1]} features, "
                f"reference has {ref.shape[1]}")
        n_ref = ref.shape[0] - (1 if leave_one_out else 0)
        if n_ref < 1:
            raise ValueError("no reference samples")
        diff = X[:, None, :] - ref[None, :, :]
        D = np.sqrt(np.sum(diff * diff, axis=2))
        if leave_one_out:
            np.fill_diagonal(D, np.inf)
        return D.min(axis=1)


_REGISTRY: Dict[str, Callable[[], NonconformityMeasure]] = {"nn": NearestNeighbor}


def register_measure(name: str, factory: Callable[[], NonconformityMeasure]) -> None:
    _REGISTRY[name] = factory


def get_measure(name: str = "nn") -> NonconformityMeasure:
    try:
        return _REGISTRY[name]()
    except KeyError:
        raise ValueError(f"unknown nonconformity measure {name!r}") from None


def nn_score(z, reference, exclude_index: Optional[int] = None) -> float:
    return NearestNeighbor().score(z, reference, exclude_index)


def score_batch(samples: Sequence, reference: Sequence,
                leave_one_out: Optional[bool] = None) -> np.ndarray:
    """Nearest-neighbor scores of ``samples`` against ``reference``.

    When ``samples`` is the reference object itself, each sample is scored
    leave-one-out against every other reference sample. Pass
    ``leave_one_out`` to force either behaviour.
    """
    if leave_one_out is None:
        leave_one_out = samples is reference
    return NearestNeighbor().score_batch(samples, reference, leave_one_out=leave_one_out)
