"""Benchmark harness: grain-size sweeps with warm-up exclusion and CSV output.

Measurement protocol: for each configuration a scheduler is built once, the
first warmup game(s) run and are discarded (they absorb one-time worker
creation), then each measured game times the full search for the first move
from an empty board. A sequential single-task baseline always runs first at
the same budget; speedups are relative to its mean time.
"""

from __future__ import annotations

import argparse
import gc
import math
import os
import sys
import time
from dataclasses import dataclass, replace
from typing import Optional

from .hex import HexBoard
from .schedulers import SCHEDULER_KINDS, make_scheduler
from .search import best_child, build_root, run_search
from .tree import SearchConfig

DEFAULT_PLAYOUTS = 1 << 17  # desk-scale default; --paper-scale restores 2^20
PAPER_PLAYOUTS = 1 << 20

CSV_HEADER = "scheduler,workers,tasks,playouts,board,game,wall_time_s,speedup"


def physical_cpu_count() -> int:
    """Physical core count, falling back to the logical count."""
    try:
        import psutil
        n = psutil.cpu_count(logical=False)
        if n:
            return n
    except ImportError:
        pass
    try:
        pairs = set()
        with open("/proc/cpuinfo") as f:
            phys = core = None
            for line in f:
                if line.startswith("physical id"):
                    phys = line.split(":")[1].strip()
                elif line.startswith("core id"):
                    core = line.split(":")[1].strip()
                elif not line.strip() and phys is not None and core is not None:
                    pairs.add((phys, core))
                    phys = core = None
        if pairs:
            return len(pairs)
    except OSError:
        pass
    return os.cpu_count() or 1


@dataclass(frozen=True)
class SweepSpec:
    """One benchmark grid: the cross product of schedulers, workers, tasks."""

    schedulers: tuple[str, ...] = ("fifo",)
    worker_counts: tuple[int, ...] = (1,)
    task_counts: tuple[int, ...] = (1,)
    playouts: int = DEFAULT_PLAYOUTS
    board_size: int = 11
    cp: float = 1.0
    games: int = 10
    warmup: int = 1
    seed: int = 1
    verify: bool = False

    def __post_init__(self):
        if self.playouts < 1:
            raise ValueError(f"playouts must be >= 1, got {self.playouts}")
        if self.games < 1:
            raise ValueError(f"games must be >= 1, got {self.games}")
        if self.warmup < 0:
            raise ValueError(f"warmup must be >= 0, got {self.warmup}")
        if self.board_size < 1:
            raise ValueError(f"board size must be >= 1, got {self.board_size}")
        for kind in self.schedulers:
            if kind not in SCHEDULER_KINDS:
                raise ValueError(f"unknown scheduler {kind!r}")
        if any(w < 1 for w in self.worker_counts):
            raise ValueError("worker counts must all be >= 1")
        if any(t < 1 for t in self.task_counts):
            raise ValueError("task counts must all be >= 1")


@dataclass(frozen=True)
class BenchRecord:
    """One measured game, or an aggregate row (game='mean'/'stddev')."""

    scheduler: str
    workers: int
    tasks: int
    playouts: int
    board: int
    game: str
    wall_time_s: float
    speedup: Optional[float]


def _measure_config(kind: str, workers: int, tasks: int, spec: SweepSpec,
                    log=None) -> list[float]:
    """Warm up, then time spec.games searches from the empty board."""
    config = SearchConfig(n_playouts=spec.playouts, n_tasks=tasks,
                          cp=spec.cp, seed=spec.seed, board_size=spec.board_size)
    times: list[float] = []
    with make_scheduler(kind, workers) as sched:
        root = None
        for game in range(spec.warmup + spec.games):
            board = HexBoard(spec.board_size)
            root = None  # free the previous tree outside the timed window
            gc.collect()
            t0 = time.perf_counter()
            root = build_root(board)
            run_search(root, board, config, sched)
            best_child(root)
            elapsed = time.perf_counter() - t0
            if spec.verify and root.visits != spec.playouts:
                raise AssertionError(
                    f"budget violated: root.visits={root.visits}, expected {spec.playouts}")
            if game >= spec.warmup:  # warm-up games are discarded
                times.append(elapsed)
            if log is not None:
                phase = "warmup" if game < spec.warmup else "game"
                log(f"{kind} workers={workers} tasks={tasks} {phase} {game}: {elapsed:.3f}s")
    return times


def _sample_stddev(xs: list[float]) -> float:
    if len(xs) < 2:
        return 0.0
    mean = sum(xs) / len(xs)
    return math.sqrt(sum((x - mean) ** 2 for x in xs) / (len(xs) - 1))


def _config_records(kind: str, workers: int, tasks: int, spec: SweepSpec,
                    times: list[float], baseline_mean: float) -> list[BenchRecord]:
    common = dict(scheduler=kind, workers=workers, tasks=tasks,
                  playouts=spec.playouts, board=spec.board_size)
    records = [
        BenchRecord(**common, game=str(i), wall_time_s=t, speedup=baseline_mean / t)
        for i, t in enumerate(times)
    ]
    mean = sum(times) / len(times)
    records.append(BenchRecord(**common, game="mean", wall_time_s=mean,
                               speedup=baseline_mean / mean))
    records.append(BenchRecord(**common, game="stddev",
                               wall_time_s=_sample_stddev(times), speedup=None))
    return records


def run_benchmark(spec: SweepSpec, log=None) -> list[BenchRecord]:
    """Run the sweep and return per-game records plus mean/stddev rows.

    The sequential baseline (tasks=1) runs first with the same playout
    budget; every speedup in the report is relative to its mean.
    """
    records: list[BenchRecord] = []

    baseline_times = _measure_config("sequential", 1, 1, spec, log)
    baseline_mean = sum(baseline_times) / len(baseline_times)
    records.extend(_config_records("sequential", 1, 1, spec,
                                   baseline_times, baseline_mean))

    for kind in spec.schedulers:
        for workers in spec.worker_counts:
            for tasks in spec.task_counts:
                if kind == "sequential" and workers == 1 and tasks == 1:
                    continue  # identical to the baseline already recorded
                times = _measure_config(kind, workers, tasks, spec, log)
                records.extend(_config_records(kind, workers, tasks, spec,
                                               times, baseline_mean))
    return records


def emit_csv(records: list[BenchRecord]) -> str:
    """Render records with a stable column order; floats round-trip exactly."""
    lines = [CSV_HEADER]
    for r in records:
        speedup = "" if r.speedup is None else repr(r.speedup)
        lines.append(f"{r.scheduler},{r.workers},{r.tasks},{r.playouts},"
                     f"{r.board},{r.game},{repr(r.wall_time_s)},{speedup}")
    return "\n".join(lines) + "\n"


def parse_csv(text: str) -> list[BenchRecord]:
    """Inverse of emit_csv."""
    lines = [ln for ln in text.splitlines() if ln]
    if not lines or lines[0] != CSV_HEADER:
        raise ValueError("missing or unexpected CSV header")
    records = []
    for ln in lines[1:]:
        sched, workers, tasks, playouts, board, game, wall, speedup = ln.split(",")
        records.append(BenchRecord(
            scheduler=sched, workers=int(workers), tasks=int(tasks),
            playouts=int(playouts), board=int(board), game=game,
            wall_time_s=float(wall),
            speedup=None if speedup == "" else float(speedup)))
    return records


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="hexmcts-bench",
        description="Grain-size benchmark sweep for parallel tree search over Hex.")
    p.add_argument("--scheduler", nargs="+", default=["fifo"], choices=SCHEDULER_KINDS,
                   metavar="KIND", help=f"back-ends to sweep: {', '.join(SCHEDULER_KINDS)}")
    p.add_argument("--workers", nargs="+", type=int, default=[os.cpu_count() or 1],
                   metavar="N", help="worker counts to sweep (default: machine cores)")
    p.add_argument("--tasks", nargs="+", type=int, default=[1],
                   metavar="N", help="task counts to sweep")
    p.add_argument("--playouts", type=int, default=DEFAULT_PLAYOUTS,
                   help=f"playout budget per move (default {DEFAULT_PLAYOUTS})")
    p.add_argument("--board", type=int, default=11, help="board size (default 11)")
    p.add_argument("--cp", type=float, default=1.0,
                   help="exploration constant (default 1.0)")
    p.add_argument("--games", type=int, default=10,
                   help="measured games per configuration (default 10)")
    p.add_argument("--warmup", type=int, default=1,
                   help="discarded warm-up games per configuration (default 1)")
    p.add_argument("--seed", type=int, default=1, help="global RNG seed (default 1)")
    p.add_argument("--csv", metavar="PATH", default=None,
                   help="write the report to PATH (default: stdout)")
    p.add_argument("--verify", action="store_true",
                   help="assert the exact playout budget after every game")
    p.add_argument("--paper-scale", action="store_true",
                   help=f"use the full {PAPER_PLAYOUTS} playout budget")
    p.add_argument("--quiet", action="store_true", help="suppress progress output")
    return p


def spec_from_args(args: argparse.Namespace) -> SweepSpec:
    spec = SweepSpec(
        schedulers=tuple(args.scheduler),
        worker_counts=tuple(args.workers),
        task_counts=tuple(args.tasks),
        playouts=args.playouts,
        board_size=args.board,
        cp=args.cp,
        games=args.games,
        warmup=args.warmup,
        seed=args.seed,
        verify=args.verify,
    )
    if args.paper_scale:
        spec = replace(spec, playouts=PAPER_PLAYOUTS)
    return spec


def main(argv: Optional[list[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    log = None if args.quiet else (lambda msg: print(msg, file=sys.stderr, flush=True))
    try:
        spec = spec_from_args(args)
        records = run_benchmark(spec, log)
    except (ValueError, AssertionError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    text = emit_csv(records)
    if args.csv:
        with open(args.csv, "w") as f:
            f.write(text)
    else:
        sys.stdout.write(text)
    return 0


if __name__ == "__main__":
    sys.exit(main())
