"""Exchangeability martingales for streaming change-point detection."""

from .beta_stats import BetaEstimator, BetaParams, beta_pdf, fit_beta
from .betting import BettingSpec
from .conformal import FullConformal, InductiveConformal, TieBreaker
from .config import RunConfig
from .detector import Alarm, DetectorConfig, azuma_threshold, doob_threshold
from .harness import ScenarioSpec, compare_martingales, generate_stream, run_experiment
from .martingale import AdditiveMartingale, MultiplicativeMartingale
from .nonconformity import NearestNeighbor, nn_score
from .stream import StepRecord, StreamDetector

__all__ = [
    "AdditiveMartingale", "Alarm", "BetaEstimator", "BetaParams", "BettingSpec",
    "DetectorConfig", "FullConformal", "InductiveConformal", "MultiplicativeMartingale",
    "NearestNeighbor", "RunConfig", "ScenarioSpec", "StepRecord", "StreamDetector",
    "TieBreaker", "azuma_threshold", "beta_pdf", "compare_martingales", "doob_threshold",
    "fit_beta", "generate_stream", "nn_score", "run_experiment",
]
