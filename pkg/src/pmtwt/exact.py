"""Brute-force ground truth for tiny inputs.

Everything here trades speed for certainty and is used to validate the
search components: an exact solver over job subsets, an exhaustive
enumeration of independent interchange-move sets, and an exhaustive
enumeration of inter-machine pair moves.  The enumerations apply moves to
plain list copies and price whole sequences from scratch, so they share no
bookkeeping with the code they check.
"""

from __future__ import annotations

from dataclasses import dataclass

from .model import Instance, Schedule, _seq_cost


@dataclass(frozen=True)
class OracleResult:
    optimum: int
    witness: Schedule
    nodes: int


def solve_exact(instance: Instance, max_jobs: int = 12) -> OracleResult:
    """Optimal total weighted tardiness for up to `max_jobs` jobs.

    Two subset DPs: best single-machine cost for every job subset (the last
    job of a set always completes at the set's total processing time), then
    a partition of the full set over machines.  Requiring each block to
    contain the lowest remaining job kills machine-relabel symmetry.
    """
    n = instance.n
    if n > max_jobs:
        raise ValueError(f"exact solver accepts at most {max_jobs} jobs, got {n}")
    p, w, d = instance.p, instance.w, instance.d
    m_eff = min(instance.m, n)
    size = 1 << n
    nodes = 0

    ptot = [0] * size
    for mask in range(1, size):
        low = mask & -mask
        ptot[mask] = ptot[mask ^ low] + p[low.bit_length()]

    # best single-machine cost per subset, remembering the last job
    best1 = [0] * size
    last = [0] * size
    for mask in range(1, size):
        t = ptot[mask]
        best = None
        pick = 0
        mm = mask
        while mm:
            low = mm & -mm
            mm ^= low
            j = low.bit_length()
            late = t - d[j]
            cand = best1[mask ^ low] + (w[j] * late if late > 0 else 0)
            if best is None or cand < best:
                best = cand
                pick = low
        best1[mask] = best
        last[mask] = pick
        nodes += 1

    # partition the full set over machines
    layers = [None, None]  # choice tables for k >= 2
    g_prev = best1
    for k in range(2, m_eff + 1):
        g = [0] * size
        ch = [0] * size
        for mask in range(1, size):
            low = mask & -mask
            rest = mask ^ low
            best = None
            pick = low
            sub = rest
            while True:
                block = sub | low
                cand = best1[block] + g_prev[mask ^ block]
                if best is None or cand < best:
                    best = cand
                    pick = block
                nodes += 1
                if sub == 0:
                    break
                sub = (sub - 1) & rest
            g[mask] = best
            ch[mask] = pick
        layers.append(ch)
        g_prev = g

    optimum = g_prev[size - 1]

    # witness: peel one block per machine, then order each block by the
    # recorded last jobs
    blocks = []
    mask = size - 1
    for k in range(m_eff, 1, -1):
        block = layers[k][mask]
        blocks.append(block)
        mask ^= block
    blocks.append(mask)
    machines = []
    for block in blocks:
        seq = []
        while block:
            pick = last[block]
            seq.append(pick.bit_length())
            block ^= pick
        seq.reverse()
        machines.append(seq)
    while len(machines) < instance.m:
        machines.append([])
    witness = Schedule(instance, machines)
    return OracleResult(optimum, witness, nodes)


def enumerate_independent_move_sets(sequence, instance: Instance,
                                    max_len: int = 10) -> int:
    """Exact minimum cost over all sets of pairwise independent moves.

    Walks every family of non-overlapping position pairs with every
    operator assignment, applies the whole family to a copy and prices the
    resulting sequence from scratch.  The empty family is included, so the
    result never exceeds the plain sequence cost.
    """
    seq = list(sequence)
    L = len(seq)
    if L > max_len:
        raise ValueError(f"enumeration accepts at most {max_len} jobs, got {L}")
    p, w, d = instance.p, instance.w, instance.d
    best = [_seq_cost(seq, p, w, d)]
    chosen = []

    def price() -> None:
        work = list(seq)
        for q, k, kind in chosen:
            seg = work[q - 1 : k]
            if kind == 0:  # swap
                seg = [seg[-1], *seg[1:-1], seg[0]]
            elif kind == 1:  # forward insertion
                seg = [*seg[1:-1], seg[-1], seg[0]]
            elif kind == 2:  # backward insertion
                seg = [seg[-1], seg[0], *seg[1:-1]]
            else:  # twist
                seg = seg[::-1]
            work[q - 1 : k] = seg
        c = _seq_cost(work, p, w, d)
        if c < best[0]:
            best[0] = c

    def walk(pos: int) -> None:
        if pos >= L:
            price()
            return
        walk(pos + 1)
        for end in range(pos + 1, L + 1):
            for kind in range(4):
                chosen.append((pos, end, kind))
                walk(end + 1)
                chosen.pop()

    walk(1)
    return best[0]


def enumerate_pair_moves(schedule: Schedule, m1: int, m2: int,
                         max_jobs: int = 14) -> int:
    """Exhaustive best delta over all transfers and exchanges between two
    machines, every insertion slot included.  Returns the maximum delta,
    which may be zero or negative; with no jobs at all the delta is 0.
    """
    inst = schedule.instance
    p, w, d = inst.p, inst.w, inst.d
    seq1 = list(schedule.machines[m1])
    seq2 = list(schedule.machines[m2])
    if len(seq1) + len(seq2) > max_jobs:
        raise ValueError(
            f"enumeration accepts at most {max_jobs} jobs on the pair, "
            f"got {len(seq1) + len(seq2)}"
        )
    base = _seq_cost(seq1, p, w, d) + _seq_cost(seq2, p, w, d)
    best = None

    def consider(a, b):
        nonlocal best
        delta = base - _seq_cost(a, p, w, d) - _seq_cost(b, p, w, d)
        if best is None or delta > best:
            best = delta

    for idx, v in enumerate(seq1):
        rest = seq1[:idx] + seq1[idx + 1 :]
        for slot in range(len(seq2) + 1):
            consider(rest, seq2[:slot] + [v] + seq2[slot:])
    for idx, v in enumerate(seq2):
        rest = seq2[:idx] + seq2[idx + 1 :]
        for slot in range(len(seq1) + 1):
            consider(seq1[:slot] + [v] + seq1[slot:], rest)
    for ia, va in enumerate(seq1):
        rest1 = seq1[:ia] + seq1[ia + 1 :]
        for ib, vb in enumerate(seq2):
            rest2 = seq2[:ib] + seq2[ib + 1 :]
            for sa in range(len(rest1) + 1):
                new1 = rest1[:sa] + [vb] + rest1[sa:]
                for sb in range(len(rest2) + 1):
                    consider(new1, rest2[:sb] + [va] + rest2[sb:])

    return 0 if best is None else best
