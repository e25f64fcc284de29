"""Core types for weighted tardiness scheduling on identical parallel machines.

Jobs carry integer processing times, weights and due dates.  A schedule
assigns every job to exactly one machine sequence; machines start at time
zero and never idle, so completion times are prefix sums of processing
times.  The objective is the total weighted tardiness

    T = sum_j w_j * max(C_j - d_j, 0)

computed in exact integer arithmetic throughout.
"""

from __future__ import annotations

import heapq
import os
from dataclasses import dataclass

DEBUG = bool(os.environ.get("PMTWT_DEBUG"))


@dataclass(frozen=True)
class Job:
    """One job: integer processing time p, weight w and due date d."""

    id: int
    p: int
    w: int
    d: int

    def __post_init__(self) -> None:
        if self.p < 1:
            raise ValueError(f"job {self.id}: processing time must be >= 1, got {self.p}")
        if self.w < 1:
            raise ValueError(f"job {self.id}: weight must be >= 1, got {self.w}")
        if self.d < 0:
            raise ValueError(f"job {self.id}: due date must be >= 0, got {self.d}")


class Instance:
    """A job set plus a machine count.

    Jobs must be listed in id order (ids run 1..n).  The lists ``p``, ``w``
    and ``d`` are lookups indexed by job id with a zero sentinel at index 0,
    which keeps the hot loops free of attribute chasing.
    """

    __slots__ = ("jobs", "m", "meta", "n", "p", "w", "d")

    def __init__(self, jobs, m: int, meta: str = ""):
        jobs = list(jobs)
        for pos, job in enumerate(jobs, start=1):
            if job.id != pos:
                raise ValueError(
                    f"jobs must be listed in id order 1..n, got id {job.id} at position {pos}"
                )
        if m < 1:
            raise ValueError(f"machine count must be >= 1, got {m}")
        self.jobs = jobs
        self.m = int(m)
        self.meta = meta
        self.n = len(jobs)
        self.p = [0] + [j.p for j in jobs]
        self.w = [0] + [j.w for j in jobs]
        self.d = [0] + [j.d for j in jobs]

    def __repr__(self) -> str:
        return f"Instance(n={self.n}, m={self.m}, meta={self.meta!r})"


class Schedule:
    """Per-machine job sequences with cached completion times and cost.

    Treat a schedule as immutable once built: search code always constructs
    new schedules instead of editing machine lists in place.  Derived values
    are computed lazily; ``recompute`` refreshes them from scratch.  With the
    PMTWT_DEBUG environment variable set, every cost access re-derives the
    value and asserts it matches the cache.
    """

    __slots__ = ("instance", "machines", "_cost", "_completion")

    def __init__(self, instance: Instance, machines, validate: bool = True):
        machines = [list(seq) for seq in machines]
        if len(machines) != instance.m:
            raise ValueError(
                f"expected {instance.m} machine sequences, got {len(machines)}"
            )
        if validate:
            _check_partition(machines, instance.n)
        self.instance = instance
        self.machines = machines
        self._cost = None
        self._completion = None

    @property
    def cost(self) -> int:
        if self._cost is None or DEBUG:
            fresh = _machines_cost(
                self.machines, self.instance.p, self.instance.w, self.instance.d
            )
            if DEBUG and self._cost is not None and self._cost != fresh:
                raise AssertionError(
                    f"cached cost {self._cost} does not match recomputed {fresh}"
                )
            self._cost = fresh
        return self._cost

    @property
    def completion(self) -> dict[int, int]:
        if self._completion is None:
            self._completion = _completions(self.machines, self.instance.p)
        return self._completion

    def recompute(self) -> int:
        """Drop caches and re-derive completion times and cost from scratch."""
        self._cost = None
        self._completion = None
        _ = self.completion
        return self.cost

    def copy(self) -> "Schedule":
        dup = Schedule(self.instance, self.machines, validate=False)
        dup._cost = self._cost
        return dup

    def __repr__(self) -> str:
        return f"Schedule(cost={self.cost}, machines={self.machines})"


def evaluate(schedule: Schedule) -> int:
    """Total weighted tardiness of a schedule, recomputed from scratch.

    Also refreshes the cached completion times.  Rejects schedules that
    duplicate or omit a job.
    """
    _check_partition(schedule.machines, schedule.instance.n)
    return schedule.recompute()


def dispatch(sequence, instance: Instance) -> Schedule:
    """List-scheduling of a priority sequence.

    Jobs are taken in sequence order and each goes to the machine with the
    smallest current load; ties go to the lowest machine index.  The
    sequence must be a permutation of 1..n.
    """
    seq = list(sequence)
    if sorted(seq) != list(range(1, instance.n + 1)):
        raise ValueError("sequence is not a permutation of 1..n")
    machines = _dispatch_lists(seq, instance.m, instance.p)
    return Schedule(instance, machines, validate=False)


def edd_sequence(instance: Instance) -> list[int]:
    """Jobs sorted by nondecreasing due date, ties by lower id."""
    d = instance.d
    return sorted(range(1, instance.n + 1), key=lambda j: (d[j], j))


# ---------------------------------------------------------------------------
# fast helpers shared by the search modules; these skip validation and work
# on raw id lists plus the instance lookup lists


def _seq_cost(seq, p, w, d, t: int = 0) -> int:
    cost = 0
    for j in seq:
        t += p[j]
        late = t - d[j]
        if late > 0:
            cost += w[j] * late
    return cost


def _machines_cost(machines, p, w, d) -> int:
    total = 0
    for seq in machines:
        t = 0
        for j in seq:
            t += p[j]
            late = t - d[j]
            if late > 0:
                total += w[j] * late
    return total


def _completions(machines, p) -> dict[int, int]:
    done = {}
    for seq in machines:
        t = 0
        for j in seq:
            t += p[j]
            done[j] = t
    return done


def _dispatch_lists(seq, m, p):
    if m == 1:
        return [list(seq)]
    machines = [[] for _ in range(m)]
    heap = [(0, k) for k in range(m)]
    pop, push = heapq.heappop, heapq.heappush
    for j in seq:
        load, k = pop(heap)
        machines[k].append(j)
        push(heap, (load + p[j], k))
    return machines


def _dispatch_cost(seq, m, p, w, d) -> int:
    if m == 1:
        return _seq_cost(seq, p, w, d)
    cost = 0
    heap = [(0, k) for k in range(m)]
    pop, push = heapq.heappop, heapq.heappush
    for j in seq:
        load, k = pop(heap)
        load += p[j]
        late = load - d[j]
        if late > 0:
            cost += w[j] * late
        push(heap, (load, k))
    return cost


def _check_partition(machines, n: int) -> None:
    seen = set()
    count = 0
    for seq in machines:
        for j in seq:
            if j in seen:
                raise ValueError(f"job {j} appears on more than one position")
            seen.add(j)
            count += 1
    if count != n or (count and (min(seen) < 1 or max(seen) > n)):
        missing = sorted(set(range(1, n + 1)) - seen)
        extra = sorted(j for j in seen if j < 1 or j > n)
        raise ValueError(
            f"schedule must cover jobs 1..{n} exactly once "
            f"(missing {missing}, foreign {extra})"
        )
