"""Single-machine dynasearch over the four interchange operators.

One step finds the best set of pairwise independent moves by dynamic
programming over sequence prefixes.  Moves (k, l) and (p, q) are
independent when max(k, l) < min(p, q), so their segments are disjoint and
their cost deltas add up exactly.  With F(k) the cheapest prefix of length
k reachable by independent moves inside it,

    F(0) = 0
    F(k) = min( F(k-1) + c(k),
                min over q < k and operators of F(q-1) + segcost(q, k, op) )

where c(k) is the tardiness cost of the job at position k left in place
and segcost is the cost of positions q..k after applying the operator to
the pair (q, k).  Both terms only permute jobs inside their ranges, so
every completion time they need is a fixed prefix sum of the input
sequence.  One step costs O(L^3) for a sequence of length L.

Ties prefer the plain prefix, so a step either strictly improves the
total cost or reports no move; iterating to a fixpoint terminates.
"""

from __future__ import annotations

import time

from .model import Instance, Schedule


def dynasearch_step(sequence, instance: Instance, start: int = 0) -> list:
    """Apply the best independent-move combination once.

    Returns a new sequence, or an unchanged copy when no combination of
    moves strictly improves the sequence's weighted tardiness (the machine
    is taken to start at time `start`).
    """
    seq = list(sequence)
    out = _pass(seq, instance.p, instance.w, instance.d, start)
    return seq if out is None else out


def dynasearch_descent(schedule: Schedule, deadline=None) -> Schedule:
    """Iterate dynasearch steps on every machine until none improves."""
    inst = schedule.instance
    machines, _ = _refine_machines(
        schedule.machines, inst.p, inst.w, inst.d, deadline
    )
    return Schedule(inst, machines, validate=False)


def _refine_machines(machines, p, w, d, deadline=None):
    """Fixpoint dynasearch on raw machine lists; returns (machines, cost)."""
    out = []
    total = 0
    for seq in machines:
        cur, cost = _fixpoint(seq, p, w, d, deadline)
        out.append(cur)
        total += cost
    return out, total


def _fixpoint(seq, p, w, d, deadline=None):
    cur = list(seq)
    clock = time.monotonic
    while True:
        if deadline is not None and clock() >= deadline:
            break
        nxt = _pass(cur, p, w, d, 0)
        if nxt is None:
            break
        cur = nxt
    t = 0
    cost = 0
    for j in cur:
        t += p[j]
        late = t - d[j]
        if late > 0:
            cost += w[j] * late
    return cur, cost


def _pass(seq, p, w, d, t0):
    """One DP pass; returns the improved sequence or None.

    The four operator walks are inlined on position-indexed arrays; this
    is the innermost loop of everything built on dynasearch, so it trades
    a little repetition for a large constant factor.  Every walk bails as
    soon as its accumulated cost reaches the current best (`room`), and
    the last element of any rearranged segment completes at C[k], so its
    lateness never needs the running clock.
    """
    L = len(seq)
    if L < 2:
        return None
    pp = [0] * L
    ww = [0] * L
    dd = [0] * L
    # completion time of position k when no move crosses it
    C = [t0] * (L + 1)
    acc = t0
    i = 0
    for j in seq:
        pj = p[j]
        acc += pj
        pp[i] = pj
        ww[i] = w[j]
        dd[i] = d[j]
        C[i + 1] = acc
        i += 1
    F = [0] * (L + 1)
    choice = [None] * (L + 1)
    for k in range(1, L + 1):
        km = k - 1
        ck = C[k]
        pk = pp[km]
        wk = ww[km]
        dk = dd[km]
        late = ck - dk
        best = F[km] + (wk * late if late > 0 else 0)
        pick = None
        for q in range(km, 0, -1):
            base = F[q - 1]
            room = best - base
            if room <= 0:
                # segment cost is nonnegative, no operator can win from here
                continue
            qm = q - 1
            ts = C[qm]
            pq = pp[qm]
            wq = ww[qm]
            dq = dd[qm]
            # swap: k's job, interior unchanged, q's job
            t = ts + pk
            late = t - dk
            cost = wk * late if late > 0 else 0
            if cost < room:
                ok = True
                for i in range(q, km):
                    t += pp[i]
                    late = t - dd[i]
                    if late > 0:
                        cost += ww[i] * late
                        if cost >= room:
                            ok = False
                            break
                if ok:
                    late = ck - dq
                    if late > 0:
                        cost += wq * late
                    if cost < room:
                        room = cost
                        best = base + cost
                        pick = (q, "swap")
            # forward: interior, k's job, q's job
            t = ts
            cost = 0
            ok = True
            for i in range(q, km):
                t += pp[i]
                late = t - dd[i]
                if late > 0:
                    cost += ww[i] * late
                    if cost >= room:
                        ok = False
                        break
            if ok:
                t += pk
                late = t - dk
                if late > 0:
                    cost += wk * late
                if cost < room:
                    late = ck - dq
                    if late > 0:
                        cost += wq * late
                    if cost < room:
                        room = cost
                        best = base + cost
                        pick = (q, "forward")
            # backward: k's job, q's job, interior
            t = ts + pk
            late = t - dk
            cost = wk * late if late > 0 else 0
            if cost < room:
                t += pq
                late = t - dq
                if late > 0:
                    cost += wq * late
                if cost < room:
                    ok = True
                    for i in range(q, km):
                        t += pp[i]
                        late = t - dd[i]
                        if late > 0:
                            cost += ww[i] * late
                            if cost >= room:
                                ok = False
                                break
                    if ok and cost < room:
                        room = cost
                        best = base + cost
                        pick = (q, "backward")
            # twist: whole segment reversed, q's job last
            t = ts
            cost = 0
            ok = True
            for i in range(km, qm, -1):
                t += pp[i]
                late = t - dd[i]
                if late > 0:
                    cost += ww[i] * late
                    if cost >= room:
                        ok = False
                        break
            if ok:
                late = ck - dq
                if late > 0:
                    cost += wq * late
                if cost < room:
                    room = cost
                    best = base + cost
                    pick = (q, "twist")
        F[k] = best
        choice[k] = pick
    # reconstruct; ties preferred the plain prefix, so any pick on the
    # optimal path means a strict improvement
    parts = []
    k = L
    moved = False
    while k > 0:
        pick = choice[k]
        if pick is None:
            parts.append((seq[k - 1],))
            k -= 1
        else:
            q, kind = pick
            parts.append(_apply_segment(seq, q, k, kind))
            moved = True
            k = q - 1
    if not moved:
        return None
    out = []
    for part in reversed(parts):
        out.extend(part)
    return out


def _apply_segment(seq, q, k, kind):
    """Jobs of positions q..k (1-based) after the operator, as a list."""
    seg = seq[q - 1 : k]
    if kind == "swap":
        return [seg[-1], *seg[1:-1], seg[0]]
    if kind == "forward":
        return [*seg[1:-1], seg[-1], seg[0]]
    if kind == "backward":
        return [seg[-1], seg[0], *seg[1:-1]]
    return seg[::-1]
