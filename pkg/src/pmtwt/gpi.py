"""Generalized pairwise interchange operators and the staged sequence search.

A move acts on two positions k < l of a sequence written as
alpha i pi j omega (i at k, j at l, pi the interior):

    swap       alpha j pi i omega        exchange the two jobs
    forward    alpha pi j i omega        push i just behind j
    backward   alpha j i pi omega        pull j just in front of i
    twist      alpha j rev(pi) i omega   reverse the whole segment

The sequence neighborhood explores these operators in stages: stage gamma
pairs position i with position i + gamma (wrapping around the end), for
every i.  The scan order over i is a fresh random permutation on every
exploration, which realizes random tie breaking among equally good first
improvements.
"""

from __future__ import annotations

import heapq
import time
from dataclasses import dataclass

from .model import Instance, _dispatch_cost

SWAP = "swap"
FORWARD = "forward"
BACKWARD = "backward"
TWIST = "twist"

OPS_BASIC = (SWAP, FORWARD, BACKWARD)
OPS_ALL = (SWAP, FORWARD, BACKWARD, TWIST)


@dataclass(frozen=True)
class GpiMove:
    """An operator acting on 1-based positions k < l."""

    kind: str
    k: int
    l: int

    def __post_init__(self):
        if self.kind not in OPS_ALL:
            raise ValueError(f"unknown operator kind {self.kind!r}")
        if not (1 <= self.k < self.l):
            raise ValueError(f"need 1 <= k < l, got k={self.k}, l={self.l}")


def apply_gpi(sequence, move: GpiMove) -> list:
    """Apply one move, returning a new sequence (a permutation of the input)."""
    if move.l > len(sequence):
        raise ValueError(f"position l={move.l} outside sequence of length {len(sequence)}")
    return _neighbor(list(sequence), move.k - 1, move.l - 1, move.kind)


def _neighbor(seq, k0: int, l0: int, kind: str) -> list:
    # 0-based positions, k0 < l0
    if kind == SWAP:
        out = list(seq)
        out[k0], out[l0] = out[l0], out[k0]
        return out
    if kind == FORWARD:
        return seq[:k0] + seq[k0 + 1 : l0 + 1] + [seq[k0]] + seq[l0 + 1 :]
    if kind == BACKWARD:
        return seq[:k0] + [seq[l0]] + seq[k0:l0] + seq[l0 + 1 :]
    if kind == TWIST:
        return seq[:k0] + seq[k0 : l0 + 1][::-1] + seq[l0 + 1 :]
    raise ValueError(f"unknown operator kind {kind!r}")


def stage_pairs(n: int, gamma: int, order) -> list[tuple[int, int]]:
    """0-based position pairs of one stage, deduplicated, in scan order.

    Position i is paired with (i + gamma) mod n; when the partner wraps
    around and lands in front of i the roles are exchanged so the pair is
    always (k, l) with k < l.  Wrapped pairs have distance n - gamma.
    """
    pairs = []
    seen = set()
    for i0 in order:
        j0 = (i0 + gamma) % n
        if i0 == j0:
            continue
        pair = (i0, j0) if i0 < j0 else (j0, i0)
        if pair in seen:
            continue
        seen.add(pair)
        pairs.append(pair)
    return pairs


def explore_n1(sequence, instance: Instance, gamma: int, rng, ops=OPS_ALL):
    """First-improving stage-gamma neighbor of the dispatched sequence.

    Returns the improved sequence or None when no operator on any stage
    pair beats the sequence's own dispatched cost.
    """
    seq = list(sequence)
    p, w, d, m = instance.p, instance.w, instance.d, instance.m
    cost = _dispatch_cost(seq, m, p, w, d)

    def ev(s):
        return _dispatch_cost(s, m, p, w, d)

    hit = _explore_stage(seq, cost, gamma, rng, ops, ev)
    return hit[0] if hit else None


def _explore_stage(seq, cost, gamma, rng, ops, evaluate, deadline=None):
    """One stage scan; returns (sequence, cost) on first improvement."""
    n = len(seq)
    if n < 2 or not (1 <= gamma <= n - 1):
        return None
    order = list(range(n))
    rng.shuffle(order)
    clock = time.monotonic
    for k0, l0 in stage_pairs(n, gamma, order):
        if deadline is not None and clock() >= deadline:
            return None
        for kind in ops:
            cand = _neighbor(seq, k0, l0, kind)
            c = evaluate(cand)
            if c < cost:
                return cand, c
    return None


def _segment_indices(k0, l0, kind):
    # positions of seq that occupy candidate slots k0..l0, in candidate order
    if kind == SWAP:
        return (l0, *range(k0 + 1, l0), k0)
    if kind == FORWARD:
        return (*range(k0 + 1, l0 + 1), k0)
    if kind == BACKWARD:
        return (l0, k0, *range(k0 + 1, l0))
    return range(l0, k0 - 1, -1)  # TWIST


def _scan_dispatch(seq, cost, gamma, rng, ops, m, p, w, d, deadline=None):
    """Stage scan against the dispatched cost, sharing prefix work.

    Same contract and rng consumption as _explore_stage with the plain
    dispatch evaluator, but a candidate at (k, l) agrees with seq before
    position k, so the machine loads and accrued cost after every prefix
    are snapshotted once and each candidate only re-dispatches its tail.
    Tardiness never decreases along the tail, so a candidate is dropped as
    soon as its partial cost reaches the incumbent cost.

    The heaps hold bare loads: which machine carries which load never
    affects any completion time, so the index bookkeeping of the real
    dispatch is dead weight here.  With one machine the clock after any
    rearranged segment equals the plain clock, so the whole tail collapses
    to a precomputed suffix cost.
    """
    n = len(seq)
    if n < 2 or not (1 <= gamma <= n - 1):
        return None
    order = list(range(n))
    rng.shuffle(order)
    pairs = stage_pairs(n, gamma, order)
    clock = time.monotonic
    pp = [0] * n
    ww = [0] * n
    dd = [0] * n
    for i, j in enumerate(seq):
        pp[i] = p[j]
        ww[i] = w[j]
        dd[i] = d[j]

    if m == 1:
        pcost = [0] * (n + 1)
        pend = [0] * (n + 1)
        t = c = 0
        for i in range(n):
            t += pp[i]
            late = t - dd[i]
            if late > 0:
                c += ww[i] * late
            pend[i + 1] = t
            pcost[i + 1] = c
        total = pcost[n]
        for k0, l0 in pairs:
            if deadline is not None and clock() >= deadline:
                return None
            suffix = total - pcost[l0 + 1]
            for kind in ops:
                cc = pcost[k0] + suffix
                if cc >= cost:
                    continue
                t = pend[k0]
                ok = True
                for idx in _segment_indices(k0, l0, kind):
                    t += pp[idx]
                    late = t - dd[idx]
                    if late > 0:
                        cc += ww[idx] * late
                        if cc >= cost:
                            ok = False
                            break
                if ok and cc < cost:
                    return _neighbor(seq, k0, l0, kind), cc
        return None

    repl = heapq.heapreplace
    heaps = [None] * (n + 1)
    pcost = [0] * (n + 1)
    heaps[0] = [0] * m
    built = 0
    for k0, l0 in pairs:
        if deadline is not None and clock() >= deadline:
            return None
        if built < k0:
            h = list(heaps[built])
            c = pcost[built]
            i = built
            while i < k0:
                load = h[0] + pp[i]
                late = load - dd[i]
                if late > 0:
                    c += ww[i] * late
                repl(h, load)
                i += 1
                heaps[i] = list(h)
                pcost[i] = c
            built = k0
        base_h = heaps[k0]
        base_c = pcost[k0]
        for kind in ops:
            h = list(base_h)
            cc = base_c
            ok = True
            for idx in _segment_indices(k0, l0, kind):
                load = h[0] + pp[idx]
                late = load - dd[idx]
                if late > 0:
                    cc += ww[idx] * late
                    if cc >= cost:
                        ok = False
                        break
                repl(h, load)
            if ok:
                for i in range(l0 + 1, n):
                    load = h[0] + pp[i]
                    late = load - dd[i]
                    if late > 0:
                        cc += ww[i] * late
                        if cc >= cost:
                            ok = False
                            break
                    repl(h, load)
            if ok and cc < cost:
                return _neighbor(seq, k0, l0, kind), cc
    return None


def full_descent_n1(sequence, instance: Instance, rng, *, ops=OPS_ALL,
                    evaluate=None, deadline=None) -> list:
    """Full first-improve descent over all stages.

    Stages run gamma = 1, 2, ..., n-1; any improvement restarts the stage
    counter at 1.  The result admits no improving operator on any position
    pair, for the given evaluation function (dispatched cost by default).
    """
    seq, _, _ = _full_descent(sequence, instance, rng, ops, evaluate, deadline)
    return seq


def _full_descent(sequence, instance, rng, ops=OPS_ALL, evaluate=None,
                  deadline=None):
    """Descent returning (sequence, cost, completed).

    `completed` is False only when a deadline cut the descent short, in
    which case the sequence is the best one reached so far.
    """
    seq = list(sequence)
    fast = evaluate is None
    if fast:
        p, w, d, m = instance.p, instance.w, instance.d, instance.m
        cost = _dispatch_cost(seq, m, p, w, d)
    else:
        cost = evaluate(seq)
    n = len(seq)
    gamma = 1
    clock = time.monotonic
    while gamma <= n - 1:
        if deadline is not None and clock() >= deadline:
            return seq, cost, False
        if fast:
            hit = _scan_dispatch(seq, cost, gamma, rng, ops, m, p, w, d, deadline)
        else:
            hit = _explore_stage(seq, cost, gamma, rng, ops, evaluate, deadline)
        if hit is None:
            gamma += 1
        else:
            seq, cost = hit
            gamma = 1
    return seq, cost, True
