"""Interchange operators and the staged sequence neighborhood."""

import random

import pytest

from pmtwt import (
    GpiMove,
    OPS_ALL,
    OPS_BASIC,
    apply_gpi,
    dispatch,
    explore_n1,
    full_descent_n1,
)
from pmtwt.gpi import _explore_stage, _full_descent, _neighbor, _scan_dispatch, stage_pairs
from pmtwt.model import _dispatch_cost
from helpers import make_instance


BASE = [1, 2, 3, 4, 5]


def test_operator_definitions():
    assert apply_gpi(BASE, GpiMove("swap", 2, 4)) == [1, 4, 3, 2, 5]
    assert apply_gpi(BASE, GpiMove("twist", 2, 4)) == [1, 4, 3, 2, 5]
    assert apply_gpi(BASE, GpiMove("forward", 1, 4)) == [2, 3, 4, 1, 5]
    assert apply_gpi(BASE, GpiMove("backward", 1, 4)) == [4, 1, 2, 3, 5]


def test_swap_equals_twist_on_adjacent_positions():
    rng = random.Random(2)
    for _ in range(20):
        n = rng.randint(2, 12)
        seq = list(range(1, n + 1))
        rng.shuffle(seq)
        for k in range(1, n):
            s = apply_gpi(seq, GpiMove("swap", k, k + 1))
            t = apply_gpi(seq, GpiMove("twist", k, k + 1))
            assert s == t


def test_operators_preserve_permutation():
    rng = random.Random(13)
    for _ in range(100):
        n = rng.randint(2, 15)
        seq = list(range(1, n + 1))
        rng.shuffle(seq)
        k = rng.randint(1, n - 1)
        l = rng.randint(k + 1, n)
        kind = rng.choice(OPS_ALL)
        out = apply_gpi(seq, GpiMove(kind, k, l))
        assert sorted(out) == list(range(1, n + 1))
        assert out is not seq


def test_move_validation():
    with pytest.raises(ValueError):
        GpiMove("rotate", 1, 2)
    with pytest.raises(ValueError):
        GpiMove("swap", 3, 2)
    with pytest.raises(ValueError):
        GpiMove("swap", 0, 2)
    with pytest.raises(ValueError):
        apply_gpi([1, 2], GpiMove("swap", 1, 5))


def test_stage_pairs_wrap_and_dedupe():
    order = list(range(5))
    assert stage_pairs(5, 2, order) == [(0, 2), (1, 3), (2, 4), (0, 3), (1, 4)]
    # n=4, gamma=2: wrapped partners duplicate the unwrapped pairs
    assert stage_pairs(4, 2, list(range(4))) == [(0, 2), (1, 3)]
    # wrapped pairs have distance n - gamma
    for (k0, l0) in stage_pairs(7, 3, list(range(7))):
        assert l0 - k0 in (3, 7 - 3)


def test_explore_returns_none_at_cost_zero():
    inst = make_instance([2, 3, 4], [1, 1, 1], [99, 99, 99], m=2)
    rng = random.Random(0)
    assert explore_n1([1, 2, 3], inst, 1, rng) is None


def test_explore_matches_exhaustive_stage_enumeration():
    rng = random.Random(31)
    for trial in range(40):
        n = 6
        p = [rng.randint(1, 10) for _ in range(n)]
        w = [rng.randint(1, 9) for _ in range(n)]
        d = [rng.randint(0, sum(p) // 2) for _ in range(n)]
        inst = make_instance(p, w, d, m=2)
        seq = list(range(1, n + 1))
        rng.shuffle(seq)
        gamma = rng.randint(1, n - 1)
        base = dispatch(seq, inst).cost
        improving_exists = False
        for (k0, l0) in stage_pairs(n, gamma, list(range(n))):
            for kind in OPS_ALL:
                if dispatch(_neighbor(seq, k0, l0, kind), inst).cost < base:
                    improving_exists = True
        got = explore_n1(seq, inst, gamma, random.Random(trial))
        if improving_exists:
            assert got is not None
            assert dispatch(got, inst).cost < base
        else:
            assert got is None


def test_full_descent_is_monotone_and_locally_optimal():
    rng = random.Random(7)
    for trial in range(15):
        n = rng.randint(4, 8)
        p = [rng.randint(1, 10) for _ in range(n)]
        w = [rng.randint(1, 9) for _ in range(n)]
        d = [rng.randint(0, sum(p) // 2) for _ in range(n)]
        inst = make_instance(p, w, d, m=2)
        seq = list(range(1, n + 1))
        rng.shuffle(seq)
        start_cost = dispatch(seq, inst).cost
        out = full_descent_n1(seq, inst, random.Random(trial))
        out_cost = dispatch(out, inst).cost
        assert out_cost <= start_cost
        # certificate: no operator on any position pair improves
        for k0 in range(n - 1):
            for l0 in range(k0 + 1, n):
                for kind in OPS_ALL:
                    cand = _neighbor(out, k0, l0, kind)
                    assert dispatch(cand, inst).cost >= out_cost


def test_full_descent_fixpoint_is_returned_unchanged():
    rng = random.Random(77)
    n = 7
    p = [rng.randint(1, 10) for _ in range(n)]
    w = [rng.randint(1, 9) for _ in range(n)]
    d = [rng.randint(0, 20) for _ in range(n)]
    inst = make_instance(p, w, d, m=2)
    seq = list(range(1, n + 1))
    first = full_descent_n1(seq, inst, random.Random(1))
    again = full_descent_n1(first, inst, random.Random(2))
    assert again == first


def test_fast_stage_scan_agrees_with_generic_scan():
    # the dispatch-evaluated scan shares prefix work; results must be
    # indistinguishable from evaluating every neighbor from scratch
    rng = random.Random(4)
    for trial in range(120):
        n = rng.randint(2, 14)
        m = rng.choice([1, 2, 3, 5])
        p = [rng.randint(1, 10) for _ in range(n)]
        w = [rng.randint(1, 9) for _ in range(n)]
        d = [rng.randint(0, sum(p) // max(1, m)) for _ in range(n)]
        inst = make_instance(p, w, d, m)
        seq = list(range(1, n + 1))
        rng.shuffle(seq)
        cost = _dispatch_cost(seq, m, inst.p, inst.w, inst.d)
        gamma = rng.randint(1, n - 1)
        ops = OPS_ALL if trial % 2 else OPS_BASIC

        def ev(s):
            return _dispatch_cost(s, m, inst.p, inst.w, inst.d)

        slow = _explore_stage(seq, cost, gamma, random.Random(trial), ops, ev)
        fast = _scan_dispatch(seq, cost, gamma, random.Random(trial), ops,
                              m, inst.p, inst.w, inst.d)
        assert slow == fast


def test_fast_descent_agrees_with_generic_descent():
    rng = random.Random(8)
    for trial in range(40):
        n = rng.randint(2, 12)
        m = rng.choice([1, 2, 4])
        p = [rng.randint(1, 10) for _ in range(n)]
        w = [rng.randint(1, 9) for _ in range(n)]
        d = [rng.randint(0, sum(p)) for _ in range(n)]
        inst = make_instance(p, w, d, m)
        seq = list(range(1, n + 1))
        rng.shuffle(seq)

        def ev(s):
            return _dispatch_cost(s, m, inst.p, inst.w, inst.d)

        a = _full_descent(list(seq), inst, random.Random(trial), OPS_ALL, ev, None)
        b = _full_descent(list(seq), inst, random.Random(trial), OPS_ALL, None, None)
        assert a == b
