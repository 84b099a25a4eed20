#!/usr/bin/env python3
"""Run the four standard optimizer setups at one seed and summarize.

Each setup writes convergence.csv and result.json under
<out>/preset<N>/seed<S>/ and prints one summary line: the winning
model, its final fitness, and the iteration where the global best
stopped improving.
"""

from __future__ import annotations

import argparse
import time
from pathlib import Path

from femselect.runner import PRESETS, preset_config, run_experiment


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument(
        "--seed", type=int, default=0, help="RNG seed shared by all four runs"
    )
    parser.add_argument(
        "--out",
        type=Path,
        default=Path("runs"),
        help="root directory for artifacts (default: runs)",
    )
    parser.add_argument(
        "--mode-shapes",
        action="store_true",
        help="also write mode_shapes.csv for the winning model of each run",
    )
    args = parser.parse_args(argv)

    header = (
        f"{'preset':>6}  {'inertia':>8}  {'objective':>9}  {'winner':>6}"
        f"  {'fitness':>12}  {'converged_at':>12}  {'seconds':>7}"
    )
    print(header)
    for simulation in sorted(PRESETS):
        mode, kind = PRESETS[simulation]
        cfg = preset_config(
            simulation,
            seed=args.seed,
            output_dir=args.out / f"preset{simulation}" / f"seed{args.seed}",
            emit_mode_shapes=args.mode_shapes,
        )
        start = time.perf_counter()
        record = run_experiment(cfg)
        elapsed = time.perf_counter() - start
        best = record.ranking[0]
        print(
            f"{simulation:>6}  {mode:>8}  {kind:>9}  {'m%d' % best.model_id:>6}"
            f"  {best.fitness:>12.6g}  {record.converged_at:>12}  {elapsed:>7.1f}"
        )
    print(f"artifacts under {args.out}/")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
