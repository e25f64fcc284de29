"""Objective, dispatch rule, and EDD ordering."""

import random

import pytest

from pmtwt import Instance, Job, Schedule, dispatch, edd_sequence, evaluate
from helpers import make_instance, random_schedule


def test_single_machine_objective():
    inst = make_instance([2, 3], [1, 2], [2, 2], m=1)
    s = Schedule(inst, [[1, 2]])
    assert s.completion == {1: 2, 2: 5}
    assert s.cost == 6


def test_two_machine_objective():
    inst = make_instance([4, 1, 2, 3], [1, 2, 1, 1], [2, 2, 2, 2], m=2)
    s = Schedule(inst, [[1], [2, 3, 4]])
    assert s.completion == {1: 4, 2: 1, 3: 3, 4: 6}
    assert s.cost == 1 * 2 + 2 * 0 + 1 * 1 + 1 * 4 == 7


def test_loose_due_dates_cost_zero():
    rng = random.Random(11)
    for _ in range(25):
        n = rng.randint(1, 9)
        m = rng.randint(1, 3)
        p = [rng.randint(1, 30) for _ in range(n)]
        total = sum(p)
        inst = make_instance(p, [rng.randint(1, 9) for _ in range(n)],
                             [total + rng.randint(0, 5) for _ in range(n)], m)
        assert random_schedule(rng, inst).cost == 0


def test_dispatch_example():
    inst = make_instance([4, 1, 2, 3], [1, 1, 1, 1], [9, 9, 9, 9], m=2)
    s = dispatch([1, 2, 3, 4], inst)
    assert s.machines == [[1], [2, 3, 4]]


def test_dispatch_single_machine_keeps_sequence():
    rng = random.Random(5)
    for _ in range(10):
        n = rng.randint(1, 8)
        inst = make_instance([rng.randint(1, 9)] * n, [1] * n, [0] * n, m=1)
        seq = list(range(1, n + 1))
        rng.shuffle(seq)
        assert dispatch(seq, inst).machines == [seq]


def test_dispatch_ties_pick_lowest_machine_index():
    # m >= n: every assignment sees all-zero loads, so job k goes to machine k
    inst = make_instance([3, 1, 2], [1, 1, 1], [0, 0, 0], m=5)
    s = dispatch([1, 2, 3], inst)
    assert s.machines == [[1], [2], [3], [], []]


def test_dispatch_requires_permutation():
    inst = make_instance([1, 1], [1, 1], [0, 0], m=2)
    with pytest.raises(ValueError):
        dispatch([1, 1], inst)
    with pytest.raises(ValueError):
        dispatch([1], inst)
    with pytest.raises(ValueError):
        dispatch([1, 3], inst)


def test_edd_order_and_tie_break():
    assert edd_sequence(make_instance([1] * 3, [1] * 3, [5, 3, 9])) == [2, 1, 3]
    assert edd_sequence(make_instance([1] * 3, [1] * 3, [4, 4, 4])) == [1, 2, 3]
    assert edd_sequence(make_instance([1] * 3, [1] * 3, [1, 2, 3])) == [1, 2, 3]


def test_evaluate_matches_cached_cost():
    rng = random.Random(23)
    for _ in range(30):
        n = rng.randint(1, 10)
        m = rng.randint(1, 4)
        p = [rng.randint(1, 20) for _ in range(n)]
        w = [rng.randint(1, 9) for _ in range(n)]
        d = [rng.randint(0, sum(p)) for _ in range(n)]
        inst = make_instance(p, w, d, m)
        s = random_schedule(rng, inst)
        assert evaluate(s) == s.cost
        assert s.recompute() == s.cost


def test_cost_invariant_under_machine_relabeling():
    rng = random.Random(37)
    for _ in range(20):
        n = rng.randint(2, 10)
        m = rng.randint(2, 4)
        p = [rng.randint(1, 15) for _ in range(n)]
        w = [rng.randint(1, 9) for _ in range(n)]
        d = [rng.randint(0, sum(p) // 2) for _ in range(n)]
        inst = make_instance(p, w, d, m)
        s = random_schedule(rng, inst)
        perm = list(range(m))
        rng.shuffle(perm)
        t = Schedule(inst, [list(s.machines[k]) for k in perm])
        assert t.cost == s.cost


def test_dispatch_loads_stay_balanced():
    # no machine idles while jobs remain, so loads differ by at most max p
    rng = random.Random(41)
    for _ in range(20):
        n = rng.randint(2, 30)
        m = rng.randint(2, 5)
        p = [rng.randint(1, 25) for _ in range(n)]
        inst = make_instance(p, [1] * n, [0] * n, m)
        seq = list(range(1, n + 1))
        rng.shuffle(seq)
        s = dispatch(seq, inst)
        loads = [sum(inst.p[j] for j in ms) for ms in s.machines]
        assert max(loads) - min(loads) <= max(p)


def test_job_and_instance_validation():
    with pytest.raises(ValueError):
        Job(1, 0, 1, 0)
    with pytest.raises(ValueError):
        Job(1, 1, 0, 0)
    with pytest.raises(ValueError):
        Job(1, 1, 1, -1)
    with pytest.raises(ValueError):
        Instance([Job(2, 1, 1, 0)], 1)  # ids must run 1..n
    with pytest.raises(ValueError):
        Instance([Job(1, 1, 1, 0)], 0)


def test_schedule_partition_validation():
    inst = make_instance([1, 1, 1], [1, 1, 1], [0, 0, 0], m=2)
    with pytest.raises(ValueError):
        Schedule(inst, [[1, 2], [2, 3]])
    with pytest.raises(ValueError):
        Schedule(inst, [[1], [2]])
    with pytest.raises(ValueError):
        Schedule(inst, [[1, 2, 3]])  # wrong machine count
