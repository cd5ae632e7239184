"""Detection rate and delay against shift size, plugin vs shifted-odd betting.

    python3 scripts/detection_delay.py --runs 50 --shifts 1 1.5 2 3
"""

import argparse

import numpy as np

from exmart.betting import BettingSpec
from exmart.detector import DetectorConfig
from exmart.harness import ScenarioSpec, compare_martingales


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--runs", type=int, default=50)
    ap.add_argument("--shifts", type=float, nargs="+", default=[1.0, 1.5, 2.0, 3.0])
    ap.add_argument("--window", type=int, default=100)
    ap.add_argument("--alpha", type=float, default=0.05)
    args = ap.parse_args()

    cfg = DetectorConfig(alpha=args.alpha, window=args.window)
    specs = [BettingSpec("plugin"), BettingSpec("odd")]
    print(f"{'shift':>6} {'betting':>8} {'detected':>9} {'median delay':>13}")
    for shift in args.shifts:
        delays = {s.family: [] for s in specs}
        for seed in range(args.runs):
            for r in compare_martingales(ScenarioSpec(shift=shift, seed=seed), specs, cfg):
                first, c = r.trace.first_alarm(), r.trace.change_step
                if first is not None and first > c:
                    delays[r.betting.family].append(first - c)
        for family, d in delays.items():
            med = f"{np.median(d):.0f}" if d else "-"
            print(f"{shift:6.2f} {family:>8} {len(d):>5}/{args.runs:<3} {med:>13}")


if __name__ == "__main__":
    main()
