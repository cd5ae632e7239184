"""Monte Carlo false-alarm rate on exchangeable streams (no shift).

    python3 scripts/false_alarm_rate.py --runs 200 --betting odd --test doob
"""

import argparse

import numpy as np

from exmart.betting import BettingSpec
from exmart.detector import DetectorConfig
from exmart.harness import ScenarioSpec, run_experiment


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--runs", type=int, default=200)
    ap.add_argument("--length", type=int, default=1000, help="monitored steps per run")
    ap.add_argument("--train-size", type=int, default=200)
    ap.add_argument("--window", type=int, default=100)
    ap.add_argument("--alpha", type=float, default=0.05)
    ap.add_argument("--test", choices=["azuma", "doob"], default="azuma")
    ap.add_argument("--betting", choices=["odd", "plugin"], default="odd")
    args = ap.parse_args()

    cfg = DetectorConfig(alpha=args.alpha, window=args.window, test=args.test, continue_after_alarm=True)
    alarms = np.zeros(args.runs, dtype=int)
    for seed in range(args.runs):
        sc = ScenarioSpec(n_pre=args.train_size + args.length, n_post=0, shift=0.0, seed=seed)
        tr = run_experiment(sc, cfg, BettingSpec(args.betting), train_size=args.train_size)
        alarms[seed] = len(tr.alarms)
    windows = args.runs * (args.length // args.window)
    print(f"{args.betting}/{args.test}, W={args.window}, alpha={args.alpha}")
    print(f"runs with any alarm: {np.count_nonzero(alarms)}/{args.runs}")
    print(f"alarms per window:   {alarms.sum() / windows:.4f}")


if __name__ == "__main__":
    main()
