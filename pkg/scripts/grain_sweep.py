#!/usr/bin/env python3
"""Reproduce the grain-size sweep: speedup vs task count per scheduler.

Runs the benchmark CLI over a power-of-two task sweep for each back-end and
prints a compact speedup table from the emitted CSV. At the default desk
scale (2^17 playouts) the full grid takes a few minutes per scheduler on a
multicore machine; pass --paper-scale for the full 2^20 budget.

Usage:
    python scripts/grain_sweep.py [--out sweep.csv] [extra hexmcts-bench flags]
"""

import argparse
import os
import sys
import tempfile
from collections import defaultdict

sys.path.insert(0, os.path.join(os.path.dirname(__file__), "..", "src"))

from hexmcts.bench import main as bench_main, parse_csv  # noqa: E402

TASK_SWEEP = [str(1 << e) for e in range(13)]  # 1 .. 4096


def run(argv=None):
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--out", default=None, help="CSV output path")
    parser.add_argument("--schedulers", nargs="+",
                        default=["fifo", "steal", "thread-per-task"])
    parser.add_argument("--workers", type=int, default=os.cpu_count() or 1)
    parser.add_argument("--games", type=int, default=3)
    args, passthrough = parser.parse_known_args(argv)

    out = args.out or os.path.join(tempfile.gettempdir(), "hexmcts_sweep.csv")
    code = bench_main([
        "--scheduler", *args.schedulers,
        "--workers", str(args.workers),
        "--tasks", *TASK_SWEEP,
        "--games", str(args.games),
        "--csv", out,
        *passthrough,
    ])
    if code != 0:
        return code

    with open(out) as f:
        records = parse_csv(f.read())
    speedups = defaultdict(dict)
    for r in records:
        if r.game == "mean" and r.scheduler != "sequential":
            speedups[r.scheduler][r.tasks] = r.speedup

    tasks = sorted({t for by_tasks in speedups.values() for t in by_tasks})
    header = "tasks".rjust(16) + "".join(f"{t:>8}" for t in tasks)
    print(f"\nspeedup vs sequential baseline ({args.workers} workers)")
    print(header)
    for kind, by_tasks in speedups.items():
        row = "".join(f"{by_tasks.get(t, float('nan')):8.2f}" for t in tasks)
        print(kind.rjust(16) + row)
    print(f"\nfull report: {out}")
    return 0


if __name__ == "__main__":
    sys.exit(run())
