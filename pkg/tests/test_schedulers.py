import random
import threading
import time

import pytest

from hexmcts import (
    SCHEDULER_KINDS,
    FifoPool,
    SequentialScheduler,
    TaskProbe,
    ThreadPerTaskScheduler,
    WorkQueue,
    WorkStealingPool,
    make_scheduler,
)

ALL_KINDS = list(SCHEDULER_KINDS)


def make(kind, workers=4):
    return make_scheduler(kind, workers)


# ---------------------------------------------------------------------------
# the submit/wait contract
# ---------------------------------------------------------------------------

@pytest.mark.parametrize("kind", ALL_KINDS)
def test_every_task_runs_exactly_once(kind):
    with make(kind) as sched:
        counts = [0] * 1000
        lock = threading.Lock()

        def bump(i):
            with lock:
                counts[i] += 1

        for i in range(1000):
            sched.submit(lambda i=i: bump(i))
        sched.wait()
        assert counts == [1] * 1000


@pytest.mark.parametrize("kind", ALL_KINDS)
def test_wait_with_no_tasks_returns_immediately(kind):
    with make(kind) as sched:
        t0 = time.perf_counter()
        sched.wait()
        assert time.perf_counter() - t0 < 0.5


@pytest.mark.parametrize("kind", ALL_KINDS)
def test_batches_are_reusable(kind):
    with make(kind) as sched:
        done = []
        for batch in range(3):
            for _ in range(50):
                sched.submit(lambda b=batch: done.append(b))
            sched.wait()
            assert len(done) == 50 * (batch + 1)


@pytest.mark.parametrize("kind", ALL_KINDS)
def test_counting_probe(kind):
    probe = TaskProbe()
    with make(kind) as sched:
        for _ in range(100):
            sched.submit(probe.wrap(lambda: None))
        sched.wait()
    assert probe.wrapped == 100
    assert probe.started == probe.finished == 100
    assert probe.in_flight == 0


@pytest.mark.parametrize("kind", ["fifo", "steal"])
def test_pool_high_water_bounded_by_workers(kind):
    probe = TaskProbe()
    with make(kind, workers=4) as sched:
        for _ in range(100):
            sched.submit(probe.wrap(lambda: time.sleep(0.001)))
        sched.wait()
    assert probe.high_water <= 4


@pytest.mark.parametrize("kind", ALL_KINDS)
def test_task_exception_surfaces_at_wait(kind):
    with make(kind) as sched:
        sched.submit(lambda: (_ for _ in ()).throw(RuntimeError("boom")))
        with pytest.raises(RuntimeError, match="boom"):
            sched.wait()
        # scheduler stays usable afterwards
        ran = []
        sched.submit(lambda: ran.append(1))
        sched.wait()
        assert ran == [1]


@pytest.mark.parametrize("kind", ["fifo", "steal", "thread-per-task"])
def test_submit_during_wait_rejected(kind):
    with make(kind) as sched:
        release = threading.Event()
        sched.submit(release.wait)
        waiter_entered = threading.Event()

        def waiter():
            waiter_entered.set()
            sched.wait()

        t = threading.Thread(target=waiter)
        t.start()
        waiter_entered.wait()
        time.sleep(0.05)  # let the waiter block inside wait()
        with pytest.raises(RuntimeError):
            sched.submit(lambda: None)
        release.set()
        t.join()


@pytest.mark.parametrize("kind", ["fifo", "steal"])
def test_closed_scheduler_rejects_submissions(kind):
    sched = make(kind)
    sched.close()
    with pytest.raises(RuntimeError):
        sched.submit(lambda: None)


@pytest.mark.parametrize("kind", ALL_KINDS)
def test_randomized_busy_spin_stress(kind):
    rng = random.Random(5)
    with make(kind) as sched:
        finished = []
        lock = threading.Lock()

        def spin(delay):
            deadline = time.perf_counter() + delay
            while time.perf_counter() < deadline:
                pass
            with lock:
                finished.append(1)

        n = 200
        for _ in range(n):
            sched.submit(lambda d=rng.uniform(0, 0.005): spin(d))
        sched.wait()
        assert len(finished) == n


def test_unknown_kind_rejected():
    with pytest.raises(ValueError):
        make_scheduler("fork-join")


def test_worker_count_validated():
    with pytest.raises(ValueError):
        FifoPool(0)


# ---------------------------------------------------------------------------
# sequential back-end
# ---------------------------------------------------------------------------

def test_sequential_runs_inline():
    sched = SequentialScheduler()
    ran = []
    sched.submit(lambda: ran.append(threading.get_ident()))
    assert ran == [threading.get_ident()]  # done before submit returned
    sched.wait()


# ---------------------------------------------------------------------------
# FIFO pool ordering
# ---------------------------------------------------------------------------

def test_single_worker_fifo_starts_in_submission_order():
    with FifoPool(1) as sched:
        starts = []
        for i in range(500):
            sched.submit(lambda i=i: starts.append(i))
        sched.wait()
        assert starts == list(range(500))


def test_multi_worker_fifo_reordering_is_bounded():
    workers = 4
    with FifoPool(workers) as sched:
        starts = []
        lock = threading.Lock()

        def task(i):
            with lock:
                starts.append(i)
            time.sleep(0.0002)

        for i in range(300):
            sched.submit(lambda i=i: task(i))
        sched.wait()
        assert sorted(starts) == list(range(300))
        for pos, submitted_index in enumerate(starts):
            assert submitted_index <= pos + workers


def test_fifo_work_conservation_no_idle_with_pending():
    # A parked worker beside a non-empty queue must be a fleeting state.
    with FifoPool(2) as sched:
        stop = threading.Event()
        streak_start = [None]
        longest = [0.0]

        def sample():
            while not stop.is_set():
                now = time.perf_counter()
                if sched.pending > 0 and sched.idle_workers > 0:
                    if streak_start[0] is None:
                        streak_start[0] = now
                    longest[0] = max(longest[0], now - streak_start[0])
                else:
                    streak_start[0] = None
                time.sleep(0.0005)

        sampler = threading.Thread(target=sample)
        sampler.start()
        for _ in range(2000):
            sched.submit(lambda: None)
        sched.wait()
        stop.set()
        sampler.join()
        assert longest[0] < 0.5


# ---------------------------------------------------------------------------
# work stealing
# ---------------------------------------------------------------------------

def test_work_queue_owner_takes_newest():
    q = WorkQueue()
    t1, t2 = (lambda: 1), (lambda: 2)
    q.push(t1)
    q.push(t2)
    assert q.pop_newest() is t2
    assert q.pop_newest() is t1
    assert q.pop_newest() is None


def test_work_queue_thief_takes_oldest():
    q = WorkQueue()
    t1, t2 = (lambda: 1), (lambda: 2)
    q.push(t1)  # oldest
    q.push(t2)
    assert q.steal_oldest() is t1
    assert q.steal_oldest() is t2
    assert q.steal_oldest() is None
    assert len(q) == 0


def test_steal_pool_drains_imbalanced_load():
    # All tasks land on a few queues; idle workers must steal the rest.
    with WorkStealingPool(4) as sched:
        counts = [0] * 2000
        lock = threading.Lock()

        def bump(i):
            with lock:
                counts[i] += 1

        for i in range(2000):
            sched.submit(lambda i=i: bump(i))
        sched.wait()
        assert counts == [1] * 2000


def test_steal_pool_worker_submission_goes_to_own_queue():
    with WorkStealingPool(2) as sched:
        inner_ran = threading.Event()

        def outer():
            sched.submit(inner_ran.set)  # submitted from a worker thread

        sched.submit(outer)
        sched.wait()
        assert inner_ran.is_set()


# ---------------------------------------------------------------------------
# thread per task
# ---------------------------------------------------------------------------

def test_thread_per_task_uses_distinct_workers():
    with ThreadPerTaskScheduler() as sched:
        names = set()
        lock = threading.Lock()

        def record():
            with lock:
                names.add(threading.current_thread().name)

        for _ in range(256):
            sched.submit(record)
        sched.wait()
        assert len(names) == 256


def test_thread_per_task_runs_off_the_submitting_thread():
    with ThreadPerTaskScheduler() as sched:
        idents = []
        sched.submit(lambda: idents.append(threading.get_ident()))
        sched.wait()
        assert idents and idents[0] != threading.get_ident()


# ---------------------------------------------------------------------------
# edge cases
# ---------------------------------------------------------------------------

def test_sequential_nested_submission_runs_inline():
    sched = SequentialScheduler()
    order = []

    def outer():
        order.append("outer-start")
        sched.submit(lambda: order.append("inner"))
        order.append("outer-end")

    sched.submit(outer)
    sched.wait()
    assert order == ["outer-start", "inner", "outer-end"]


@pytest.mark.parametrize("kind", ["fifo", "steal"])
def test_close_releases_workers_despite_task_error(kind):
    sched = make(kind, workers=2)
    sched.submit(lambda: (_ for _ in ()).throw(ValueError("task failed")))
    with pytest.raises(ValueError):
        sched.close()
    assert all(not w.is_alive() for w in sched._workers)
