"""Grain-size-controlled parallel search driver.

The playout budget is split into one chunk per task; each chunk runs the
full UCT loop against one shared root, so the task count alone sets the
grain size. Fewer tasks than workers starves the pool; far more tasks than
workers trades scheduling overhead for load balance.
"""

from __future__ import annotations

from dataclasses import dataclass

from .hex import HexBoard, Move
from .rng import stream_for_task
from .schedulers import Scheduler
from .tree import SearchConfig, TreeNode, best_child, uct_search


@dataclass(frozen=True)
class ChunkPlan:
    """Iteration counts per task: sums exactly to the budget, sizes within 1."""

    per_task: tuple[int, ...]


def partition_playouts(n_playouts: int, n_tasks: int) -> ChunkPlan:
    """Split a playout budget into n_tasks chunks, preserving the exact total.

    Plain integer division would drop the remainder when the budget does not
    divide evenly; instead the first (n_playouts mod n_tasks) chunks take one
    extra iteration. A task count above the budget is clamped down so no task
    runs zero iterations.
    """
    if n_tasks < 1:
        raise ValueError(f"n_tasks must be >= 1, got {n_tasks}")
    if n_playouts < 1:
        raise ValueError(f"n_playouts must be >= 1, got {n_playouts}")
    n_tasks = min(n_tasks, n_playouts)
    base, extra = divmod(n_playouts, n_tasks)
    return ChunkPlan(tuple([base + 1] * extra + [base] * (n_tasks - extra)))


def build_root(board: HexBoard) -> TreeNode:
    """Validate the position and build the shared root, slots pre-sized."""
    if board.winner() is not None:
        raise ValueError("cannot search a position that is already won")
    if board.empty_count == 0:
        raise ValueError("cannot search a position with no legal moves")
    return TreeNode.for_root(board)


def run_search(root: TreeNode, board: HexBoard, config: SearchConfig,
               scheduler: Scheduler) -> None:
    """Submit one UCT chunk per task against the shared root and block.

    Task t draws from its own stream derived from (seed, t), so runs are
    reproducible per configuration. After the join, root.visits equals
    config.n_playouts exactly.
    """
    plan = partition_playouts(config.n_playouts, config.n_tasks)
    for t, m_t in enumerate(plan.per_task):
        stream = stream_for_task(config.seed, t)

        def chunk(m: int = m_t, s=stream) -> None:
            uct_search(root, board, m, s, config.cp)

        scheduler.submit(chunk)
    scheduler.wait()


def parallel_search(board: HexBoard, config: SearchConfig,
                    scheduler: Scheduler) -> Move:
    """Full driver: shared root, chunked tasks, join, most-visited move."""
    root = build_root(board)
    run_search(root, board, config, scheduler)
    return best_child(root)
