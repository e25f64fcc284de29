"""Inter-machine moves, the machine-pair improvement graph and the
matching-based simultaneous step.

For an ordered machine pair (m1, m2) three kinds of moves are examined:

  (a) transfer one job from m1 into m2,
  (b) transfer one job from m2 into m1,
  (c) exchange one job of m1 with one job of m2.

A transferred job lands at the insertion slot minimizing the receiving
sequence's weighted tardiness; for an exchange both jobs are extracted
first and each insertion slot is then chosen independently in the reduced
receiving sequence.  The delta of a move is the exact decrease of the two
machines' summed cost; other machines are untouched.

Because each machine belongs to at most one pair of a matching, deltas of
matched pairs add up exactly.  One simultaneous step therefore builds the
graph of positive-delta pairs, picks a maximum weight matching, applies
every matched move, and asserts that the realized decrease equals the
matching weight.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field

from .model import Instance, Schedule, _seq_cost


@dataclass(frozen=True)
class PairMove:
    """One move between machines `src` and `dst`.

    transfer: jobs = (v,), slots = (slot of v in dst,)
    exchange: jobs = (i from src, j from dst), slots = (slot of i in dst
    after removing j, slot of j in src after removing i)
    """

    kind: str
    src: int
    dst: int
    jobs: tuple
    slots: tuple
    delta: int


@dataclass
class ImprovementGraph:
    """Positive-delta moves on machine pairs; vertices are machine indexes."""

    m: int
    weights: dict = field(default_factory=dict)
    moves: dict = field(default_factory=dict)

    def __post_init__(self):
        for (a, b), wt in self.weights.items():
            if not (0 <= a < b < self.m):
                raise ValueError(f"bad edge ({a}, {b}) for m={self.m}")
            if wt <= 0:
                raise ValueError(f"edge ({a}, {b}) has nonpositive weight {wt}")


def _best_insertion(seq, p, w, d, v):
    """Best slot for job v in a sequence; returns (total cost, slot).

    O(len(seq)): prefix costs stay as they are, suffix costs are the old
    completions shifted by p[v], and the first slot attaining the minimum
    wins.
    """
    L = len(seq)
    comp = [0] * (L + 1)
    pref = [0] * (L + 1)
    t = 0
    c = 0
    for s in range(1, L + 1):
        j = seq[s - 1]
        t += p[j]
        comp[s] = t
        late = t - d[j]
        if late > 0:
            c += w[j] * late
        pref[s] = c
    pv, wv, dv = p[v], w[v], d[v]
    suf = [0] * (L + 1)
    acc = 0
    for s in range(L, 0, -1):
        j = seq[s - 1]
        late = comp[s] + pv - d[j]
        if late > 0:
            acc += w[j] * late
        suf[s - 1] = acc
    best = None
    slot = 0
    for s in range(L + 1):
        late = comp[s] + pv - dv
        cand = pref[s] + (wv * late if late > 0 else 0) + suf[s]
        if best is None or cand < best:
            best = cand
            slot = s
    return best, slot


def best_pair_move(schedule: Schedule, m1: int, m2: int) -> PairMove | None:
    """Largest-delta move between two machines, or None when nothing gains.

    Ties are broken by kind, (a) then (b) then (c), then by ascending job
    ids (lexicographic for exchanges), then by the lowest insertion slot.
    """
    inst = schedule.instance
    return _best_pair_move(
        schedule.machines[m1], schedule.machines[m2], m1, m2,
        inst.p, inst.w, inst.d,
    )


def _best_pair_move(seq1, seq2, m1, m2, p, w, d):
    base = _seq_cost(seq1, p, w, d) + _seq_cost(seq2, p, w, d)
    best_delta = 0
    best = None

    by_id1 = sorted((j, idx) for idx, j in enumerate(seq1))
    by_id2 = sorted((j, idx) for idx, j in enumerate(seq2))

    # (a) transfers m1 -> m2
    for v, idx in by_id1:
        rest = seq1[:idx] + seq1[idx + 1 :]
        cost_rest = _seq_cost(rest, p, w, d)
        cost_in, slot = _best_insertion(seq2, p, w, d, v)
        delta = base - cost_rest - cost_in
        if delta > best_delta:
            best_delta = delta
            best = PairMove("transfer", m1, m2, (v,), (slot,), delta)

    # (b) transfers m2 -> m1
    for v, idx in by_id2:
        rest = seq2[:idx] + seq2[idx + 1 :]
        cost_rest = _seq_cost(rest, p, w, d)
        cost_in, slot = _best_insertion(seq1, p, w, d, v)
        delta = base - cost_rest - cost_in
        if delta > best_delta:
            best_delta = delta
            best = PairMove("transfer", m2, m1, (v,), (slot,), delta)

    # (c) exchanges; the reduced second sequences are cached per j
    reduced2 = [(j, seq2[:idx] + seq2[idx + 1 :]) for j, idx in by_id2]
    for i, idx_i in by_id1:
        rest1 = seq1[:idx_i] + seq1[idx_i + 1 :]
        for j, rest2 in reduced2:
            cost_i, slot_i = _best_insertion(rest2, p, w, d, i)
            cost_j, slot_j = _best_insertion(rest1, p, w, d, j)
            delta = base - cost_i - cost_j
            if delta > best_delta:
                best_delta = delta
                best = PairMove("exchange", m1, m2, (i, j), (slot_i, slot_j), delta)

    return best


def build_improvement_graph(schedule: Schedule, deadline=None) -> ImprovementGraph:
    """Best positive move for every machine pair, as a weighted graph."""
    inst = schedule.instance
    p, w, d = inst.p, inst.w, inst.d
    machines = schedule.machines
    m = inst.m
    weights = {}
    moves = {}
    clock = time.monotonic
    for a in range(m):
        for b in range(a + 1, m):
            if deadline is not None and clock() >= deadline:
                return ImprovementGraph(m, weights, moves)
            mv = _best_pair_move(machines[a], machines[b], a, b, p, w, d)
            if mv is not None:
                weights[(a, b)] = mv.delta
                moves[(a, b)] = mv
    return ImprovementGraph(m, weights, moves)


def best_matching(graph: ImprovementGraph) -> list[tuple[int, int]]:
    """Exact maximum weight matching by DP over subsets of the vertices
    that carry at least one edge.  Fine for the machine counts used here."""
    verts = sorted({v for e in graph.weights for v in e})
    if not verts:
        return []
    idx = {v: i for i, v in enumerate(verts)}
    k = len(verts)
    adj = [[] for _ in range(k)]
    for (a, b), wt in sorted(graph.weights.items()):
        adj[idx[a]].append((idx[b], wt))
        adj[idx[b]].append((idx[a], wt))
    size = 1 << k
    value = [0] * size
    take = [None] * size
    for mask in range(1, size):
        low = (mask & -mask).bit_length() - 1
        rest = mask ^ (1 << low)
        best = value[rest]
        pick = None
        for other, wt in adj[low]:
            bit = 1 << other
            if mask & bit:
                cand = wt + value[rest ^ bit]
                if cand > best:
                    best = cand
                    pick = other
        value[mask] = best
        take[mask] = pick
    out = []
    mask = size - 1
    while mask:
        low = (mask & -mask).bit_length() - 1
        pick = take[mask]
        mask ^= 1 << low
        if pick is not None:
            mask ^= 1 << pick
            a, b = verts[low], verts[pick]
            out.append((a, b) if a < b else (b, a))
    return sorted(out)


def matching_weight(graph: ImprovementGraph, matching) -> int:
    return sum(graph.weights[e] for e in matching)


def _apply_pair_move(machines, mv: PairMove) -> None:
    if mv.kind == "transfer":
        (v,) = mv.jobs
        (slot,) = mv.slots
        machines[mv.src].remove(v)
        machines[mv.dst].insert(slot, v)
    else:
        i, j = mv.jobs
        slot_i, slot_j = mv.slots
        machines[mv.src].remove(i)
        machines[mv.dst].remove(j)
        machines[mv.dst].insert(slot_i, i)
        machines[mv.src].insert(slot_j, j)


def n2_step(schedule: Schedule, deadline=None) -> Schedule | None:
    """One simultaneous improving step, or None at a fixpoint.

    Applies the moves of a maximum weight matching of the improvement
    graph and verifies that the realized cost decrease equals the matching
    weight; a mismatch means broken move bookkeeping and raises.
    """
    graph = build_improvement_graph(schedule, deadline)
    matching = best_matching(graph)
    if not matching:
        return None
    machines = [list(seq) for seq in schedule.machines]
    predicted = 0
    for edge in matching:
        _apply_pair_move(machines, graph.moves[edge])
        predicted += graph.weights[edge]
    out = Schedule(schedule.instance, machines, validate=False)
    realized = schedule.cost - out.cost
    if realized != predicted:
        raise AssertionError(
            f"matched moves promised a decrease of {predicted} "
            f"but realized {realized}"
        )
    return out


def full_descent_n2(schedule: Schedule, deadline=None) -> Schedule:
    """Iterate simultaneous steps until no machine pair offers a gain."""
    out, _ = _descend_pairs(schedule, deadline)
    return out


def _descend_pairs(schedule, deadline=None):
    """Descent returning (schedule, completed); completed is False when a
    deadline stopped the loop before reaching the fixpoint."""
    cur = schedule
    clock = time.monotonic
    while True:
        if deadline is not None and clock() >= deadline:
            return cur, False
        nxt = n2_step(cur, deadline)
        if nxt is None:
            return cur, True
        cur = nxt
