"""Deterministic per-task random number streams with batched delivery.

Each task of a parallel search owns one stream. A stream's output is a pure
function of (seed, task_id): Philox is counter-based, so distinct keys give
statistically independent substreams without any jump-ahead bookkeeping.
Raw 64-bit words are pulled from the generator in blocks of up to 65,536
values and consumed from a buffer; buffering is invisible to callers.
"""

from __future__ import annotations

import numpy as np

MAX_BATCH = 65536  # ceiling on values delivered by one generator call

_U64 = 1 << 64


class RngStream:
    """Buffered stream of uniform random values for a single task.

    Streams are single-owner: they may move between worker threads but must
    never be shared. All draws derive from Philox keyed by (seed, task_id),
    so replaying with the same pair reproduces the sequence exactly,
    regardless of batch size.
    """

    __slots__ = ("seed", "task_id", "_bitgen", "_batch", "_buf", "_pos")

    def __init__(self, seed: int, task_id: int, batch_size: int = MAX_BATCH):
        if not 1 <= batch_size <= MAX_BATCH:
            raise ValueError(f"batch_size must be in [1, {MAX_BATCH}], got {batch_size}")
        if task_id < 0:
            raise ValueError(f"task_id must be non-negative, got {task_id}")
        self.seed = seed
        self.task_id = task_id
        # 128-bit key: seed in the high word, task id in the low word.
        self._bitgen = np.random.Philox(key=((seed % _U64) << 64) | (task_id % _U64))
        self._batch = batch_size
        self._buf: list[int] = []
        self._pos = 0

    def _refill(self) -> None:
        # random_raw is the version-stable BitGenerator output.
        self._buf = self._bitgen.random_raw(self._batch).tolist()
        self._pos = 0

    def _take(self, n: int) -> list[int]:
        """Consume the next n raw 64-bit words."""
        out: list[int] = []
        while n > 0:
            if self._pos == len(self._buf):
                self._refill()
            chunk = self._buf[self._pos:self._pos + n]
            self._pos += len(chunk)
            n -= len(chunk)
            out.extend(chunk)
        return out

    def next_below(self, bound: int) -> int:
        """Uniform integer in [0, bound), free of modulo bias.

        Uses rejection on the raw 64-bit words: values at or above the
        largest multiple of bound are discarded and redrawn.
        """
        if bound < 1:
            raise ValueError(f"bound must be >= 1, got {bound}")
        if bound == 1:
            return 0
        limit = _U64 - (_U64 % bound)
        buf, pos = self._buf, self._pos
        while True:
            if pos == len(buf):
                self._refill()
                buf, pos = self._buf, 0
            x = buf[pos]
            pos += 1
            if x < limit:
                self._pos = pos
                return x % bound

    def permutation(self, n: int) -> list[int]:
        """Uniform random permutation of range(n).

        Orders n fresh 64-bit keys; conditional on distinct keys (collision
        probability < n^2 / 2^65) the result is exactly uniform, and the
        stable sort keeps the output deterministic even on a collision.
        """
        if n < 0:
            raise ValueError(f"n must be non-negative, got {n}")
        if n <= 1:
            return list(range(n))
        keys = np.array(self._take(n), dtype=np.uint64)
        return np.argsort(keys, kind="stable").tolist()


def stream_for_task(seed: int, task_id: int, batch_size: int = MAX_BATCH) -> RngStream:
    """Derive the independent stream owned by one task of a search."""
    return RngStream(seed, task_id, batch_size)
