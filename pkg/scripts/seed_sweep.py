#!/usr/bin/env python3
"""Sweep one optimizer setup over a seed range and tally the outcomes.

Runs the chosen setup once per seed, printing the winner of each run,
then a tally of winning models and summary statistics for the
iteration where the global best stopped improving.
"""

from __future__ import annotations

import argparse
import statistics
import time
from collections import Counter
from pathlib import Path

from femselect.runner import PRESETS, preset_config, run_experiment


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument(
        "preset",
        type=int,
        choices=sorted(PRESETS),
        help="which of the four standard setups to run",
    )
    parser.add_argument(
        "--seeds", type=int, default=10, help="number of seeds in the sweep"
    )
    parser.add_argument(
        "--first-seed", type=int, default=0, help="first seed of the range"
    )
    parser.add_argument(
        "--out",
        type=Path,
        default=Path("runs"),
        help="root directory for artifacts (default: runs)",
    )
    args = parser.parse_args(argv)

    mode, kind = PRESETS[args.preset]
    print(f"preset {args.preset}: inertia={mode} objective={kind}")

    winners: Counter[int] = Counter()
    converged: list[int] = []
    for seed in range(args.first_seed, args.first_seed + args.seeds):
        cfg = preset_config(
            args.preset,
            seed=seed,
            output_dir=args.out / f"preset{args.preset}" / f"seed{seed}",
        )
        start = time.perf_counter()
        record = run_experiment(cfg)
        elapsed = time.perf_counter() - start
        best = record.ranking[0]
        winners[best.model_id] += 1
        converged.append(record.converged_at)
        print(
            f"  seed {seed:>3}: winner m{best.model_id}"
            f"  fitness {best.fitness:.6g}"
            f"  converged_at {record.converged_at}  ({elapsed:.1f}s)"
        )

    tally = "  ".join(f"m{mid}:{count}" for mid, count in winners.most_common())
    print(f"winners: {tally}")
    print(
        f"converged_at: min {min(converged)}"
        f"  median {statistics.median(converged):g}"
        f"  max {max(converged)}"
    )
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
