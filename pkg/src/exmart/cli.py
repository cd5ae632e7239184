"""Command-line front end.

    exmart detect stream.csv --trace trace.csv --alarms alarms.jsonl
    exmart simulate --shift 2 --seed 7 --stream stream.csv --trace trace.csv
    exmart thresholds --window 100 --alpha 0.05 --test doob

Exit codes: 0 no alarm, 10 alarm(s) raised, 2 usage or data error.
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import sys
from contextlib import ExitStack
from datetime import datetime
from typing import IO, Iterator, List, Optional, Sequence, Tuple

import numpy as np

from .config import RunConfig
from .detector import azuma_threshold, doob_threshold
from .harness import ScenarioSpec, generate_stream
from .stream import StepRecord, StreamDetector

EXIT_OK = 0
EXIT_ALARM = 10
EXIT_ERROR = 2

TRACE_HEADER = ("step", "p_value", "increment", "martingale", "alpha_hat", "beta_hat", "alarm")


class DataError(ValueError):
    pass


def fmt(x: float) -> str:
    return format(x, ".12g")


def _check_timestamp(cell: str, line: int) -> None:
    try:
        int(cell)
        return
    except ValueError:
        pass
    try:
        datetime.fromisoformat(cell.replace("Z", "+00:00"))
    except ValueError:
        raise DataError(f"line {line}: timestamp {cell!r} is neither ISO-8601 nor an integer epoch") from None


def read_stream(fh: IO[str]) -> Iterator[np.ndarray]:
    """Yield one feature vector per CSV row, validating strictly."""
    reader = csv.reader(fh)
    try:
        header = next(reader)
    except StopIteration:
        raise DataError("line 1: input is empty, expected a header row") from None
    header = [h.strip() for h in header]
    has_ts = bool(header) and header[0].lower() == "timestamp"
    names = header[1:] if has_ts else header
    if not names or any(n == "" for n in names):
        raise DataError("line 1: header must name every feature column")
    width = len(header)
    for row in reader:
        line = reader.line_num
        if len(row) != width:
            raise DataError(f"line {line}: expected {width} columns, got {len(row)}")
        if has_ts:
            _check_timestamp(row[0].strip(), line)
            row = row[1:]
        values = np.empty(len(names))
        for k, (name, cell) in enumerate(zip(names, row)):
            try:
                v = float(cell)
            except ValueError:
                raise DataError(f"line {line}: column {name!r}: cannot parse {cell!r} as a number") from None
            if not math.isfinite(v):
                raise DataError(f"line {line}: column {name!r}: non-finite value {cell.strip()!r}")
            values[k] = v
        yield values


def write_stream(path: str, samples: np.ndarray) -> None:
    # repr keeps full float precision so the stream replays exactly.
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow([f"x{k}" for k in range(samples.shape[1])])
        for row in samples:
            w.writerow([repr(float(v)) for v in row])


def trace_row(rec: StepRecord) -> List[str]:
    return [str(rec.step), fmt(rec.p_value), fmt(rec.increment), fmt(rec.martingale),
            fmt(rec.alpha_hat), fmt(rec.beta_hat), "1" if rec.alarm is not None else "0"]


def alarm_line(rec: StepRecord) -> str:
    a = rec.alarm
    return json.dumps({"step": a.step, "statistic": float(fmt(a.statistic)),
                       "threshold": float(fmt(a.threshold)), "test": a.test})


def process(samples, cfg: RunConfig, trace_fh: Optional[IO[str]],
            alarms_fh: IO[str]) -> Tuple[int, int]:
    """Run the detector over ``samples`` one at a time; returns (steps, alarms)."""
    det = StreamDetector(cfg.betting_spec(), cfg.detector_config(), mode=cfg.mode,
                         train_size=cfg.train_size, seed=cfg.resolved_seed(),
                         beta_mode=cfg.beta_mode, denominator_mode=cfg.denominator_mode)
    writer = None
    if trace_fh is not None:
        writer = csv.writer(trace_fh, lineterminator="\n")
        writer.writerow(TRACE_HEADER)
    seen = steps = n_alarms = 0
    for z in samples:
        seen += 1
        rec = det.update(z)
        if rec is None:
            continue
        steps += 1
        if writer is not None:
            writer.writerow(trace_row(rec))
        if rec.alarm is not None:
            n_alarms += 1
            alarms_fh.write(alarm_line(rec) + "\n")
    if cfg.mode == "inductive" and seen < cfg.train_size:
        raise DataError(f"inductive mode needs at least {cfg.train_size} rows, got {seen}")
    return steps, n_alarms


def _run(samples, cfg: RunConfig) -> int:
    with ExitStack() as stack:
        trace_fh = stack.enter_context(open(cfg.trace, "w", newline="")) if cfg.trace else None
        alarms_fh = stack.enter_context(open(cfg.alarms, "w")) if cfg.alarms else sys.stdout
        steps, n_alarms = process(samples, cfg, trace_fh, alarms_fh)
    print(f"{steps} steps, {n_alarms} alarm(s)", file=sys.stderr)
    return EXIT_ALARM if n_alarms else EXIT_OK


def _config(args) -> RunConfig:
    base = RunConfig.load(args.config) if args.config else RunConfig()
    cfg = base.override(mode=args.mode, train_size=args.train_size, window=args.window,
                        alpha=args.alpha, test=args.test, betting=args.betting,
                        epsilon=args.epsilon, bound=args.bound, seed=args.seed,
                        trace=args.trace, alarms=args.alarms,
                        continue_after_alarm=args.continue_after_alarm)
    if args.save_config:
        cfg.save(args.save_config)
    return cfg


def cmd_detect(args) -> int:
    cfg = _config(args)
    with open(args.input, newline="") as fh:
        return _run(read_stream(fh), cfg)


def cmd_simulate(args) -> int:
    cfg = _config(args)
    n_pre = args.n_pre if args.n_pre is not None else 700
    scenario = ScenarioSpec(n_pre=n_pre, n_post=args.n_post, dim=args.dim,
                            shift=tuple(args.shift), seed=cfg.resolved_seed())
    if cfg.mode == "inductive" and cfg.train_size >= scenario.n_pre:
        raise DataError(f"--train-size {cfg.train_size} must be below --n-pre {scenario.n_pre}")
    samples = generate_stream(scenario)
    if args.stream:
        write_stream(args.stream, samples)
    change = scenario.n_pre - (cfg.train_size if cfg.mode == "inductive" else 0)
    print(f"change after trace step {change}", file=sys.stderr)
    return _run(iter(samples), cfg)


def cmd_thresholds(args) -> int:
    if not 0.0 < args.alpha < 1.0:
        raise DataError(f"--alpha must lie in (0, 1), got {args.alpha}")
    if args.window < 1:
        raise DataError(f"--window must be >= 1, got {args.window}")
    if args.test == "azuma":
        value = azuma_threshold(args.window, args.alpha, args.bound)
    else:
        value = doob_threshold(args.window, args.alpha)
    print(format(value, ".6g"))
    return EXIT_OK


def _run_flags(p: argparse.ArgumentParser) -> None:
    # Defaults live in RunConfig; None here means "not given on the command line".
    p.add_argument("--config", help="JSON run config; flags override its values")
    p.add_argument("--save-config", metavar="PATH", help="write the effective config as JSON")
    p.add_argument("--mode", choices=["full", "inductive"])
    p.add_argument("--train-size", type=int, metavar="N")
    p.add_argument("--window", type=int, metavar="W")
    p.add_argument("--alpha", type=float, metavar="A", help="significance level")
    p.add_argument("--test", choices=["azuma", "doob"])
    p.add_argument("--betting", choices=["power", "mixture", "odd", "plugin"])
    p.add_argument("--epsilon", type=float, metavar="E", help="power-bet exponent")
    p.add_argument("--bound", type=float, metavar="B", help="increment bound (plugin clip, Azuma scale)")
    p.add_argument("--seed", type=int, metavar="S", help="falls back to $EXMART_SEED, then 0")
    p.add_argument("--trace", metavar="PATH", help="per-step trace CSV")
    p.add_argument("--alarms", metavar="PATH", help="alarm records, one JSON object per line (default stdout)")
    p.add_argument("--continue-after-alarm", action="store_const", const=True, default=None,
                   help="reset the martingale after an alarm instead of halting")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="exmart", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("detect", help="detect change points in a CSV stream")
    p.add_argument("input", help="CSV with a header row; optional leading 'timestamp' column")
    _run_flags(p)
    p.set_defaults(func=cmd_detect)

    p = sub.add_parser("simulate", help="run the detector on a synthetic Gaussian mean-shift stream")
    _run_flags(p)
    p.add_argument("--n-pre", type=int, help="pre-change length incl. training (default 700)")
    p.add_argument("--n-post", type=int, default=500)
    p.add_argument("--dim", type=int, default=1)
    p.add_argument("--shift", type=float, nargs="+", default=[2.0],
                   help="post-change mean shift (one value, or one per dimension)")
    p.add_argument("--stream", metavar="PATH", help="write the generated samples as CSV")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("thresholds", help="print an alarm threshold")
    p.add_argument("--window", type=int, default=100)
    p.add_argument("--alpha", type=float, default=0.05)
    p.add_argument("--test", choices=["azuma", "doob"], default="azuma")
    p.add_argument("--bound", type=float, default=1.0)
    p.set_defaults(func=cmd_thresholds)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_ERROR if exc.code else EXIT_OK
    try:
        return args.func(args)
    except (ValueError, OSError) as exc:
        print(f"exmart: error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
