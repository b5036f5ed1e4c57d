"""Parallel Monte Carlo Tree Search over Hex with grain-size control.

One shared UCT tree is searched by many tasks; the playout budget is split
into a configurable number of chunks, and interchangeable schedulers (FIFO
work sharing, work stealing, thread per task, sequential) execute them.
"""

from .hex import BLACK, EMPTY, WHITE, DisjointSet, HexBoard, Move, Player, random_playout
from .rng import MAX_BATCH, RngStream, stream_for_task
from .schedulers import (
    SCHEDULER_KINDS,
    FifoPool,
    Scheduler,
    SequentialScheduler,
    TaskProbe,
    ThreadPerTaskScheduler,
    WorkQueue,
    WorkStealingPool,
    make_scheduler,
)
from .search import ChunkPlan, build_root, parallel_search, partition_playouts, run_search
from .tree import (
    SearchConfig,
    TreeNode,
    backup,
    best_child,
    dump_tree,
    expand,
    select,
    uct_score,
    uct_search,
)

__all__ = [
    "BLACK", "EMPTY", "WHITE", "DisjointSet", "HexBoard", "Move", "Player",
    "random_playout", "MAX_BATCH", "RngStream", "stream_for_task",
    "SCHEDULER_KINDS", "FifoPool", "Scheduler", "SequentialScheduler",
    "TaskProbe", "ThreadPerTaskScheduler", "WorkQueue", "WorkStealingPool",
    "make_scheduler", "ChunkPlan", "build_root", "parallel_search",
    "partition_playouts", "run_search", "SearchConfig", "TreeNode", "backup",
    "best_child", "dump_tree", "expand", "select", "uct_score", "uct_search",
]
