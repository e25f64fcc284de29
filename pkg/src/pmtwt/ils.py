"""Iterated local search drivers.

Three modes share one kick-and-descend skeleton:

  A1  sequence search: first-improve descents over the swap, forward and
      backward operators, every neighbor priced by dispatching it.
  A2  the same driver, but every dispatched schedule is refined by a full
      per-machine dynasearch descent before its cost is read.
  A3  schedule search: per-machine dynasearch, a full sequence descent
      over all four operators, then an inner loop alternating a descent
      over the machine-pair matching neighborhood with single staged
      explorations whose neighbors are dispatched and dynasearch refined.

Every run is driven by a budget: wall-clock seconds in production or an
outer-iteration count for deterministic tests.  With an iteration budget
the clock never influences control flow, so equal seeds give bit-equal
runs.  All modes stop early when the incumbent reaches cost zero.
"""

from __future__ import annotations

import random
import time
from dataclasses import dataclass, field

from .model import (
    Instance,
    Schedule,
    _dispatch_cost,
    _dispatch_lists,
    dispatch,
    edd_sequence,
)
from .gpi import OPS_ALL, OPS_BASIC, _full_descent, _neighbor, stage_pairs
from .dynasearch import _fixpoint, _refine_machines
from .machine_pairs import _descend_pairs

MODES = ("A1", "A2", "A3")


@dataclass
class SearchConfig:
    mode: str = "A3"
    time_limit: float | None = None
    max_iterations: int | None = None
    max_no_improve: int = 5
    gamma_max: int = 5
    kick_strength: int = 3
    seed: int = 0

    def __post_init__(self):
        if self.mode not in MODES:
            raise ValueError(f"mode must be one of {MODES}, got {self.mode!r}")
        if (self.time_limit is None) == (self.max_iterations is None):
            raise ValueError("set exactly one of time_limit and max_iterations")
        if self.time_limit is not None and not self.time_limit > 0:
            raise ValueError(f"time_limit must be positive, got {self.time_limit}")
        if self.max_iterations is not None and self.max_iterations < 1:
            raise ValueError(f"max_iterations must be >= 1, got {self.max_iterations}")
        if self.max_no_improve < 0 or self.gamma_max < 1 or self.kick_strength < 1:
            raise ValueError("bad search parameters")


@dataclass
class RunReport:
    """Outcome of one run; `best` holds the best schedule found."""

    instance: str
    mode: str
    seed: int
    time_limit: float | None
    best_cost: int
    time_to_best: float
    descents: int
    iterations: int
    best: Schedule = field(repr=False, compare=False, default=None)


class _Budget:
    def __init__(self, config: SearchConfig):
        self.t0 = time.monotonic()
        self.deadline = (
            self.t0 + config.time_limit if config.time_limit is not None else None
        )
        self.max_iterations = config.max_iterations

    def exhausted(self, iterations: int) -> bool:
        if self.max_iterations is not None and iterations >= self.max_iterations:
            return True
        return self.deadline is not None and time.monotonic() >= self.deadline

    def elapsed(self) -> float:
        return time.monotonic() - self.t0


def linearize(schedule: Schedule) -> list[int]:
    """Machine sequences concatenated in machine order."""
    return [j for seq in schedule.machines for j in seq]


def _start_order(machines, p):
    """Jobs sorted by start time (ties: machine index, then position).

    Dispatching this sequence approximately reconstructs the schedule it
    came from, because the dispatch rule assigns each job to the machine
    that is free earliest; concatenation has no such property, so this is
    the working sequence handed to the outer sequence descent.
    """
    events = []
    for k, ms in enumerate(machines):
        t = 0
        for i, j in enumerate(ms):
            events.append((t, k, i, j))
            t += p[j]
    events.sort()
    return [e[3] for e in events]


def kick(schedule: Schedule, strength: int, rng) -> Schedule:
    """Random perturbation: `strength` inter-machine transfers or exchanges.

    Each move is uniformly a transfer (random job to a random slot of a
    random other machine) or an exchange of two jobs between two machines
    with positions preserved.  With a single machine the kick falls back to
    random swaps inside its sequence.  All choices come from `rng`.
    """
    machines = [list(seq) for seq in schedule.machines]
    m = len(machines)
    for _ in range(strength):
        if m == 1:
            seq = machines[0]
            if len(seq) >= 2:
                a = rng.randrange(len(seq))
                b = rng.randrange(len(seq) - 1)
                if b >= a:
                    b += 1
                seq[a], seq[b] = seq[b], seq[a]
            continue
        loaded = [k for k in range(m) if machines[k]]
        if not loaded:
            break
        exchange = len(loaded) >= 2 and rng.random() < 0.5
        if exchange:
            ka, kb = rng.sample(loaded, 2)
            pa = rng.randrange(len(machines[ka]))
            pb = rng.randrange(len(machines[kb]))
            machines[ka][pa], machines[kb][pb] = machines[kb][pb], machines[ka][pa]
        else:
            ka = rng.choice(loaded)
            kb = rng.randrange(m - 1)
            if kb >= ka:
                kb += 1
            pa = rng.randrange(len(machines[ka]))
            v = machines[ka].pop(pa)
            machines[kb].insert(rng.randrange(len(machines[kb]) + 1), v)
    return Schedule(schedule.instance, machines, validate=False)


def _kick_sequence(seq, strength, rng, ops):
    out = list(seq)
    n = len(out)
    if n < 2:
        return out
    for _ in range(strength):
        kind = ops[rng.randrange(len(ops))]
        k0 = rng.randrange(n)
        l0 = rng.randrange(n - 1)
        if l0 >= k0:
            l0 += 1
        if l0 < k0:
            k0, l0 = l0, k0
        out = _neighbor(out, k0, l0, kind)
    return out


def search_n3(schedule: Schedule, gamma_max: int, rng, deadline=None, memo=None):
    """Single staged exploration around a schedule, dynasearch refined.

    The working sequence is the schedule linearized; each stage-gamma
    neighbor is dispatched and then refined by per-machine dynasearch.
    Returns the first refined schedule cheaper than the input, or None
    when stages 1..gamma_max all fail.

    `memo` caches per-machine fixpoints keyed by the exact job sequence;
    neighbors share most machine sequences after dispatch, and the caller
    may carry the dict across explorations of the same instance.
    """
    inst = schedule.instance
    p, w, d, m = inst.p, inst.w, inst.d, inst.m
    base = schedule.cost
    seq = linearize(schedule)
    n = len(seq)
    clock = time.monotonic
    if memo is None:
        memo = {}
    for gamma in range(1, min(gamma_max, n - 1) + 1):
        order = list(range(n))
        rng.shuffle(order)
        for k0, l0 in stage_pairs(n, gamma, order):
            if deadline is not None and clock() >= deadline:
                return None
            for kind in OPS_ALL:
                cand = _neighbor(seq, k0, l0, kind)
                machines = _dispatch_lists(cand, m, p)
                # two sweeps over the machines: cached fixpoints cost
                # nothing, so their exact sums reject most neighbors before
                # any new fixpoint runs; the abort is sound because
                # per-machine refined costs are nonnegative
                out = [None] * m
                total = 0
                missing = []
                for k, ms in enumerate(machines):
                    hit = memo.get(tuple(ms))
                    if hit is None:
                        missing.append(k)
                        continue
                    cur, cost = hit
                    total += cost
                    if total >= base:
                        break
                    out[k] = cur
                else:
                    # uncached machines most expensive first: refined cost
                    # never exceeds the plain cost, so expensive ones cross
                    # the abort threshold soonest
                    rawc = []
                    for k in missing:
                        t = 0
                        c = 0
                        for j in machines[k]:
                            t += p[j]
                            late = t - d[j]
                            if late > 0:
                                c += w[j] * late
                        rawc.append((-c, k))
                    rawc.sort()
                    for _, k in rawc:
                        ms = machines[k]
                        hit = _fixpoint(ms, p, w, d, deadline)
                        if deadline is None or clock() < deadline:
                            memo[tuple(ms)] = hit
                        cur, cost = hit
                        total += cost
                        if total >= base:
                            break
                        out[k] = cur
                    else:
                        return Schedule(
                            inst, [list(x) for x in out], validate=False
                        )
    return None


def run_a1(instance: Instance, config: SearchConfig) -> RunReport:
    return _sequence_ils(instance, config, refined=False)


def run_a2(instance: Instance, config: SearchConfig) -> RunReport:
    return _sequence_ils(instance, config, refined=True)


def _sequence_ils(instance, config, refined):
    """Shared A1/A2 driver; `refined` switches the dynasearch evaluator in.

    After each complete descent the incumbent and a no-improvement counter
    are updated; the next start point is a kicked copy of the current
    sequence, or of the incumbent once the counter passes max_no_improve
    (the counter then resets).
    """
    rng = random.Random(config.seed)
    budget = _Budget(config)
    p, w, d, m = instance.p, instance.w, instance.d, instance.m
    ops = OPS_BASIC

    if refined:

        def ev(s):
            _, cost = _refine_machines(_dispatch_lists(s, m, p), p, w, d)
            return cost

    else:
        ev = None

    seq = edd_sequence(instance)
    best_seq = list(seq)
    best_cost = ev(seq) if refined else _dispatch_cost(seq, m, p, w, d)
    ttb = budget.elapsed()
    iters = 0
    descents = 0
    no_improve = 0
    while best_cost > 0 and not budget.exhausted(iters):
        seq, cost, done = _full_descent(
            seq, instance, rng, ops=ops, evaluate=ev, deadline=budget.deadline
        )
        iters += 1
        if done:
            descents += 1
        if cost < best_cost:
            best_seq, best_cost = list(seq), cost
            no_improve = 0
            ttb = budget.elapsed()
        else:
            no_improve += 1
        if best_cost == 0 or budget.exhausted(iters):
            break
        if no_improve > config.max_no_improve:
            seq = _kick_sequence(best_seq, config.kick_strength, rng, ops)
            no_improve = 0
        else:
            seq = _kick_sequence(seq, config.kick_strength, rng, ops)

    machines = _dispatch_lists(best_seq, m, p)
    if refined:
        machines, refined_cost = _refine_machines(machines, p, w, d)
        assert refined_cost == best_cost
    best = Schedule(instance, machines, validate=False)
    return _report(instance, config, budget, best_cost, ttb, descents, iters, best)


def run_a3(instance: Instance, config: SearchConfig) -> RunReport:
    """The combined driver.

    One outer iteration: dynasearch every machine of the working schedule,
    run a full sequence descent on its start-time ordering (the sequence
    whose dispatch best reconstructs the schedule), then alternate the
    machine-pair descent with single staged explorations while the latter
    keep improving.  The incumbent and a no-improvement counter decide the
    next start: the result itself when a neighborhood improved, otherwise
    a kicked copy of the result, or of the incumbent once the counter
    passes max_no_improve.
    """
    rng = random.Random(config.seed)
    budget = _Budget(config)
    p, w, d, m = instance.p, instance.w, instance.d, instance.m

    cur = dispatch(edd_sequence(instance), instance)
    star = cur
    best_cost = cur.cost
    ttb = budget.elapsed()
    iters = 0
    descents = 0
    no_improve = 0
    fixpoints = {}
    while best_cost > 0 and not budget.exhausted(iters):
        dl = budget.deadline
        machines, _ = _refine_machines(cur.machines, p, w, d, dl)
        seq = _start_order(machines, p)
        seq, _, done = _full_descent(
            seq, instance, rng, ops=OPS_ALL, evaluate=None, deadline=dl
        )
        if done:
            descents += 1
        s1 = dispatch(seq, instance)
        s3 = s1
        n2_failed = True
        n3_failed = True
        while True:
            s1_cost = s1.cost
            s2, n2_done = _descend_pairs(s1, dl)
            if n2_done:
                descents += 1
            n2_failed = s2.cost >= s1_cost
            if len(fixpoints) > 200_000:
                fixpoints.clear()
            s3 = search_n3(s2, config.gamma_max, rng, dl, memo=fixpoints)
            if s3 is None:
                n3_failed = True
                s3 = s2
                break
            n3_failed = False
            s1 = s3
            if dl is not None and time.monotonic() >= dl:
                break
        iters += 1
        if s3.cost < best_cost:
            star = s3
            best_cost = s3.cost
            no_improve = 0
            ttb = budget.elapsed()
        else:
            no_improve += 1
        if best_cost == 0 or budget.exhausted(iters):
            break
        if n2_failed and n3_failed:
            if no_improve > config.max_no_improve:
                cur = kick(star, config.kick_strength, rng)
                no_improve = 0
            else:
                cur = kick(s3, config.kick_strength, rng)
        else:
            cur = s3

    return _report(instance, config, budget, best_cost, ttb, descents, iters, star)


def _report(instance, config, budget, best_cost, ttb, descents, iters, best):
    if config.time_limit is not None:
        ttb = min(ttb, config.time_limit)
    return RunReport(
        instance=instance.meta,
        mode=config.mode,
        seed=config.seed,
        time_limit=config.time_limit,
        best_cost=best_cost,
        time_to_best=ttb,
        descents=descents,
        iterations=iters,
        best=best,
    )


def solve(instance: Instance, config: SearchConfig) -> RunReport:
    """Run the configured mode on an instance."""
    if config.mode == "A1":
        return run_a1(instance, config)
    if config.mode == "A2":
        return run_a2(instance, config)
    return run_a3(instance, config)
