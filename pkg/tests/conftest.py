import random

import pytest

from hexmcts import HexBoard, Scheduler, TaskProbe


def play_random_game(board: HexBoard, rng: random.Random, stop_at_win: bool = True):
    """Drive a game with stdlib randomness (independent of the library's RNG),
    returning every intermediate cells snapshot."""
    snapshots = []
    while board.empty_count:
        if stop_at_win and board.winner() is not None:
            break
        move = rng.choice(board.legal_moves())
        board.place(move)
        snapshots.append(board.cells.copy())
    return snapshots


class ProbeScheduler(Scheduler):
    """Wraps a real scheduler, passing every task through a TaskProbe."""

    def __init__(self, inner: Scheduler, probe: TaskProbe):
        self.inner = inner
        self.probe = probe
        self.kind = f"probed-{inner.kind}"
        self.n_workers = inner.n_workers

    def submit(self, task):
        self.inner.submit(self.probe.wrap(task))

    def wait(self):
        self.inner.wait()

    def close(self):
        self.inner.close()


@pytest.fixture
def sys_rng():
    return random.Random(0xC0FFEE)
