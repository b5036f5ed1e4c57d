"""Task execution back-ends behind one submit/wait contract.

Four interchangeable schedulers:

- SequentialScheduler: runs each task inline at submit time.
- FifoPool: work sharing. One shared FIFO queue; idle workers block on a
  condition and take from the head, so tasks start in submission order.
- WorkStealingPool: each worker owns a double-ended queue. External
  submissions go round-robin to the queues; a worker takes the newest task
  from its own queue, and when empty steals the oldest task from a random
  victim (child stealing).
- ThreadPerTask: spawns a fresh thread per submitted task.

submit never blocks on task execution. wait blocks until every task of the
current batch has finished; afterwards the scheduler accepts a new batch.
Submitting while another thread sits in wait for the same batch is a
contract violation and raises. A task exception is captured and re-raised
from wait, never lost in a worker.
"""

from __future__ import annotations

import os
import random
import threading
import time
from collections import deque
from typing import Callable, Optional

Task = Callable[[], None]

SCHEDULER_KINDS = ("sequential", "fifo", "steal", "thread-per-task")


class Scheduler:
    """Shared submit/wait bookkeeping; subclasses provide execution."""

    kind: str = "abstract"

    def __init__(self, n_workers: int = 1):
        if n_workers < 1:
            raise ValueError(f"n_workers must be >= 1, got {n_workers}")
        self.n_workers = n_workers
        self._lock = threading.Lock()
        self._batch_done = threading.Condition(self._lock)
        self._submitted = 0
        self._finished = 0
        self._waiters = 0
        self._error: Optional[BaseException] = None
        self._closed = False
        self._task_ctx = threading.local()  # marks threads currently running a task

    # -- subclass hooks -------------------------------------------------

    def _dispatch(self, task: Task) -> None:
        raise NotImplementedError

    # -- public contract ------------------------------------------------

    def submit(self, task: Task) -> None:
        """Enqueue one task; returns without waiting for execution.

        A running task may submit children into its own batch (wait then
        also covers them); any other thread submitting while a wait is in
        progress is a contract violation.
        """
        in_task = getattr(self._task_ctx, "active", False)
        with self._lock:
            if self._closed:
                raise RuntimeError("scheduler is closed")
            if self._waiters and not in_task:
                raise RuntimeError("submit while wait() is in progress for this batch")
            self._submitted += 1
        self._dispatch(task)

    def wait(self) -> None:
        """Block until every submitted task of the batch has completed."""
        with self._batch_done:
            self._waiters += 1
            try:
                while self._finished < self._submitted:
                    self._batch_done.wait()
            finally:
                self._waiters -= 1
            if self._error is not None:
                error, self._error = self._error, None
                raise error

    def close(self) -> None:
        """Wait for outstanding work and release workers."""
        self.wait()

    def __enter__(self) -> "Scheduler":
        return self

    def __exit__(self, *exc) -> None:
        self.close()

    # -- worker side ----------------------------------------------------

    def _run_task(self, task: Task) -> None:
        was_in_task = getattr(self._task_ctx, "active", False)
        self._task_ctx.active = True
        try:
            task()
        except BaseException as e:  # don't let a task kill its worker
            with self._lock:
                if self._error is None:
                    self._error = e
        finally:
            self._task_ctx.active = was_in_task  # inline tasks can nest
            with self._batch_done:
                self._finished += 1
                if self._finished == self._submitted:
                    self._batch_done.notify_all()


class SequentialScheduler(Scheduler):
    """Inline execution: the task has already run when submit returns."""

    kind = "sequential"

    def __init__(self, n_workers: int = 1):  # worker count is irrelevant
        super().__init__(1)

    def _dispatch(self, task: Task) -> None:
        self._run_task(task)


class FifoPool(Scheduler):
    """Work-sharing pool: one shared FIFO queue, persistent workers.

    A submitted task is appended to the tail and picked up as soon as a
    worker is idle; with one worker, start order is exactly submission
    order. The idle_workers/pending properties exist for tests probing
    work conservation.
    """

    kind = "fifo"

    def __init__(self, n_workers: int):
        super().__init__(n_workers)
        self._queue: deque[Task] = deque()
        self._work_ready = threading.Condition(self._lock)
        self._idle = 0
        self._workers = [
            threading.Thread(target=self._worker, name=f"fifo-worker-{i}", daemon=True)
            for i in range(n_workers)
        ]
        for w in self._workers:
            w.start()

    @property
    def pending(self) -> int:
        return len(self._queue)

    @property
    def idle_workers(self) -> int:
        return self._idle

    def _dispatch(self, task: Task) -> None:
        with self._lock:
            self._queue.append(task)
            self._work_ready.notify()

    def _worker(self) -> None:
        while True:
            with self._lock:
                while not self._queue and not self._closed:
                    self._idle += 1
                    self._work_ready.wait()
                    self._idle -= 1
                if self._queue:
                    task = self._queue.popleft()
                else:  # closed and drained
                    return
            self._run_task(task)

    def close(self) -> None:
        try:
            self.wait()
        finally:  # release workers even if a task error surfaces from wait
            with self._lock:
                self._closed = True
                self._work_ready.notify_all()
            for w in self._workers:
                w.join()


class WorkQueue:
    """One worker's double-ended task queue with a linearizable steal.

    The owner pushes and pops at the newest end; thieves take from the
    oldest end, so the first task put in is the first one stolen.
    """

    __slots__ = ("_items", "_lock")

    def __init__(self):
        self._items: deque[Task] = deque()
        self._lock = threading.Lock()

    def __len__(self) -> int:
        return len(self._items)

    def push(self, task: Task) -> None:
        with self._lock:
            self._items.append(task)

    def pop_newest(self) -> Optional[Task]:
        with self._lock:
            return self._items.pop() if self._items else None

    def steal_oldest(self) -> Optional[Task]:
        with self._lock:
            return self._items.popleft() if self._items else None


class WorkStealingPool(Scheduler):
    """Work stealing with per-worker deques and child-stealing semantics.

    An idle worker retries its own queue and random victims a few times
    with short randomized backoff before parking; submissions wake parked
    workers. Each task is obtained by exactly one worker.
    """

    kind = "steal"

    _SPIN_ROUNDS = 4

    def __init__(self, n_workers: int):
        super().__init__(n_workers)
        self.queues = [WorkQueue() for _ in range(n_workers)]
        self._work_ready = threading.Condition(self._lock)
        self._rr = 0  # round-robin cursor for external submissions
        self._worker_index: dict[int, int] = {}
        self._workers = [
            threading.Thread(target=self._worker, args=(i,),
                             name=f"steal-worker-{i}", daemon=True)
            for i in range(n_workers)
        ]
        for w in self._workers:
            w.start()

    def _dispatch(self, task: Task) -> None:
        idx = self._worker_index.get(threading.get_ident())
        if idx is None:  # external submission: spread round-robin
            with self._lock:
                idx = self._rr
                self._rr = (self._rr + 1) % self.n_workers
        self.queues[idx].push(task)
        with self._lock:
            self._work_ready.notify_all()

    def _find_task(self, own_idx: int, rng: random.Random) -> Optional[Task]:
        task = self.queues[own_idx].pop_newest()
        if task is not None:
            return task
        victims = [i for i in range(self.n_workers) if i != own_idx]
        rng.shuffle(victims)
        for v in victims:
            task = self.queues[v].steal_oldest()
            if task is not None:
                return task
        return None

    def _worker(self, idx: int) -> None:
        self._worker_index[threading.get_ident()] = idx
        rng = random.Random(idx)
        while True:
            task = self._find_task(idx, rng)
            if task is None:
                for _ in range(self._SPIN_ROUNDS):  # bounded randomized retry
                    time.sleep(rng.uniform(0, 0.0002))
                    task = self._find_task(idx, rng)
                    if task is not None:
                        break
            if task is None:
                with self._lock:
                    if self._closed:
                        return
                    self._work_ready.wait(timeout=0.005)
                continue
            self._run_task(task)

    def close(self) -> None:
        try:
            self.wait()
        finally:
            with self._lock:
                self._closed = True
                self._work_ready.notify_all()
            for w in self._workers:
                w.join()


class ThreadPerTaskScheduler(Scheduler):
    """A fresh worker thread per task, started at submit time."""

    kind = "thread-per-task"

    def __init__(self, n_workers: int = 1):  # worker count is irrelevant
        super().__init__(1)
        self._threads: list[threading.Thread] = []
        self._spawned = 0

    def _dispatch(self, task: Task) -> None:
        name = f"tpt-{self._spawned}"
        self._spawned += 1
        t = threading.Thread(target=self._run_task, args=(task,), name=name, daemon=True)
        self._threads.append(t)
        t.start()

    def wait(self) -> None:
        super().wait()
        for t in self._threads:
            t.join()
        self._threads.clear()


def make_scheduler(kind: str, n_workers: Optional[int] = None) -> Scheduler:
    """Build a scheduler back-end by name; see SCHEDULER_KINDS.

    n_workers defaults to the machine's hardware concurrency; sequential and
    thread-per-task ignore it.
    """
    if n_workers is None:
        n_workers = os.cpu_count() or 1
    if kind == "sequential":
        return SequentialScheduler()
    if kind == "fifo":
        return FifoPool(n_workers)
    if kind == "steal":
        return WorkStealingPool(n_workers)
    if kind == "thread-per-task":
        return ThreadPerTaskScheduler()
    raise ValueError(f"unknown scheduler kind {kind!r}; expected one of {SCHEDULER_KINDS}")


class TaskProbe:
    """Test instrumentation: wrap tasks to count starts, finishes and the
    high-water mark of tasks in flight at once."""

    def __init__(self):
        self._lock = threading.Lock()
        self.wrapped = 0
        self.started = 0
        self.finished = 0
        self.in_flight = 0
        self.high_water = 0

    def wrap(self, task: Task) -> Task:
        self.wrapped += 1

        def probed() -> None:
            with self._lock:
                self.started += 1
                self.in_flight += 1
                if self.in_flight > self.high_water:
                    self.high_water = self.in_flight
            try:
                task()
            finally:
                with self._lock:
                    self.finished += 1
                    self.in_flight -= 1

        return probed
