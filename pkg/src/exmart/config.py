"""Run configuration shared by the CLI and the experiment scripts."""

from __future__ import annotations

import json
import os
from dataclasses import asdict, dataclass, fields, replace
from typing import Any, Dict, Optional

from .betting import BettingSpec
from .detector import DetectorConfig

SEED_ENV = "EXMART_SEED"


@dataclass(frozen=True)
class RunConfig:
    mode: str = "inductive"
    train_size: int = 200
    window: int = 100
    alpha: float = 0.05
    test: str = "azuma"
    betting: str = "plugin"
    epsilon: float = 0.5
    grid_size: int = 20
    bound: Optional[float] = None
    seed: Optional[int] = None
    beta_mode: str = "window"
    denominator_mode: str = "m+1"
    continue_after_alarm: bool = False
    trace: Optional[str] = None
    alarms: Optional[str] = None

    def __post_init__(self):
        if self.mode not in ("inductive", "full"):
            raise ValueError(f"mode must be 'inductive' or 'full', got {self.mode!r}")
        if self.mode == "inductive" and self.train_size < 2:
            raise ValueError("train_size must be >= 2 in inductive mode")
        if self.beta_mode not in ("window", "cumulative"):
            raise ValueError(f"beta_mode must be 'window' or 'cumulative', got {self.beta_mode!r}")
        if self.denominator_mode not in ("m+1", "index"):
            raise ValueError(f"denominator_mode must be 'm+1' or 'index', got {self.denominator_mode!r}")
        if self.seed is not None and int(self.seed) < 0:
            raise ValueError("seed must be a non-negative integer")
        # Surface detector and betting validation errors at construction time.
        self.detector_config()
        self.betting_spec()

    def detector_config(self) -> DetectorConfig:
        return DetectorConfig(alpha=self.alpha, window=self.window, test=self.test,
                              bound=self.bound, continue_after_alarm=self.continue_after_alarm)

    def betting_spec(self) -> BettingSpec:
        return BettingSpec(family=self.betting, epsilon=self.epsilon, grid_size=self.grid_size)

    def resolved_seed(self) -> int:
        """Explicit seed, else ``$EXMART_SEED``, else 0."""
        if self.seed is not None:
            return int(self.seed)
        env = os.environ.get(SEED_ENV)
        if env not in (None, ""):
            try:
                seed = int(env)
            except ValueError:
                raise ValueError(f"{SEED_ENV}={env!r} is not an integer") from None
            if seed < 0:
                raise ValueError(f"{SEED_ENV} must be non-negative")
            return seed
        return 0

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "RunConfig":
        known = {f.name for f in fields(cls)}
        unknown = set(data) - known
        if unknown:
            raise ValueError(f"unknown config keys: {', '.join(sorted(unknown))}")
        return cls(**data)

    def save(self, path: str) -> None:
        with open(path, "w") as fh:
            json.dump(self.to_dict(), fh, indent=2, sort_keys=True)
            fh.write("\n")

    @classmethod
    def load(cls, path: str) -> "RunConfig":
        with open(path) as fh:
            data = json.load(fh)
        if not isinstance(data, dict):
            raise ValueError(f"{path}: config must be a JSON object")
        return cls.from_dict(data)

    def override(self, **kwargs) -> "RunConfig":
        """Copy with every non-None keyword applied."""
        return replace(self, **{k: v for k, v in kwargs.items() if v is not None})
