"""Machine-pair moves, the improvement graph, matching, and N2 descent."""

import itertools
import random

import pytest

from pmtwt import (
    ImprovementGraph,
    Schedule,
    best_matching,
    best_pair_move,
    build_improvement_graph,
    enumerate_pair_moves,
    full_descent_n2,
    matching_weight,
    n2_step,
)
from helpers import make_instance, random_schedule, schedule_cost


def test_no_positive_move_on_cost_zero_schedule():
    inst = make_instance([2, 3, 4], [1, 1, 1], [50, 50, 50], m=2)
    s = Schedule(inst, [[1, 2], [3]])
    assert s.cost == 0
    assert best_pair_move(s, 0, 1) is None
    assert build_improvement_graph(s).weights == {}
    assert n2_step(s) is None


def test_single_tardy_job_moves_to_empty_machine():
    # sigma1 = (2) alone and tardy only because job 1 delays it; machine 2
    # is empty, so the transfer is evaluated and its delta is the exact
    # tardiness decrease of starting job 2 at time zero
    inst = make_instance([6, 4], [1, 5], [6, 4], m=2)
    s = Schedule(inst, [[1, 2], []])
    assert s.cost == 5 * (10 - 4)
    mv = best_pair_move(s, 0, 1)
    assert mv is not None
    assert mv.delta == s.cost  # job 2 finishes at 4 = its due date
    out = n2_step(s)
    assert out is not None
    assert out.cost == 0


def test_pair_move_matches_exhaustive_enumeration():
    rng = random.Random(101)
    for trial in range(40):
        n = rng.randint(2, 10)
        p = [rng.randint(1, 10) for _ in range(n)]
        w = [rng.randint(1, 9) for _ in range(n)]
        d = [rng.randint(0, sum(p) // 2) for _ in range(n)]
        inst = make_instance(p, w, d, m=2)
        s = random_schedule(rng, inst)
        mv = best_pair_move(s, 0, 1)
        brute = enumerate_pair_moves(s, 0, 1)
        if mv is None:
            assert brute <= 0
        else:
            assert mv.delta == brute


def test_two_machines_single_edge_step_equals_pair_move():
    rng = random.Random(7)
    for _ in range(25):
        n = rng.randint(3, 9)
        p = [rng.randint(1, 10) for _ in range(n)]
        w = [rng.randint(1, 9) for _ in range(n)]
        d = [rng.randint(0, sum(p) // 3) for _ in range(n)]
        inst = make_instance(p, w, d, m=2)
        s = random_schedule(rng, inst)
        graph = build_improvement_graph(s)
        assert len(graph.weights) <= 1
        mv = best_pair_move(s, 0, 1)
        out = n2_step(s)
        if mv is None:
            assert out is None
        else:
            assert out is not None
            assert s.cost - out.cost == mv.delta


def test_graph_weights_match_independent_calls():
    rng = random.Random(19)
    n, m = 12, 4
    p = [rng.randint(1, 10) for _ in range(n)]
    w = [rng.randint(1, 9) for _ in range(n)]
    d = [rng.randint(0, sum(p) // m) for _ in range(n)]
    inst = make_instance(p, w, d, m)
    s = random_schedule(rng, inst)
    graph = build_improvement_graph(s)
    for a in range(m):
        for b in range(a + 1, m):
            mv = best_pair_move(s, a, b)
            if mv is None:
                assert (a, b) not in graph.weights
            else:
                assert graph.weights[(a, b)] == mv.delta


def _all_matchings(edges):
    out = [[]]
    for k in range(1, len(edges) + 1):
        for combo in itertools.combinations(edges, k):
            used = set()
            ok = True
            for (a, b) in combo:
                if a in used or b in used:
                    ok = False
                    break
                used.update((a, b))
            if ok:
                out.append(list(combo))
    return out


def test_matching_example():
    g = ImprovementGraph(5, {(1, 2): 5, (3, 4): 3, (1, 3): 6}, {})
    got = best_matching(g)
    assert got == [(1, 2), (3, 4)]
    assert matching_weight(g, got) == 8


def test_matching_trivia():
    g = ImprovementGraph(3, {(0, 2): 4}, {})
    assert best_matching(g) == [(0, 2)]
    empty = ImprovementGraph(3, {}, {})
    assert best_matching(empty) == []
    assert matching_weight(empty, []) == 0


def test_matching_against_brute_force():
    rng = random.Random(23)
    for _ in range(60):
        m = rng.randint(2, 8)
        weights = {}
        for a in range(m):
            for b in range(a + 1, m):
                if rng.random() < 0.5:
                    weights[(a, b)] = rng.randint(1, 50)
        g = ImprovementGraph(m, weights, {})
        got = best_matching(g)
        best = max(
            (sum(weights[e] for e in mt) for mt in _all_matchings(list(weights))),
            default=0,
        )
        assert matching_weight(g, got) == best
        used = [v for e in got for v in e]
        assert len(used) == len(set(used))


def test_matching_beats_every_single_edge():
    g = ImprovementGraph(6, {(0, 1): 9, (1, 2): 10, (2, 3): 9}, {})
    got = best_matching(g)
    assert matching_weight(g, got) >= 10
    assert matching_weight(g, got) == 18


def test_graph_validation():
    with pytest.raises(ValueError):
        ImprovementGraph(3, {(2, 1): 4}, {})
    with pytest.raises(ValueError):
        ImprovementGraph(3, {(0, 4): 4}, {})
    with pytest.raises(ValueError):
        ImprovementGraph(3, {(0, 1): 0}, {})


def test_step_cost_drop_equals_matching_weight():
    # the additivity contract: realized decrease == predicted weight,
    # asserted inside n2_step and re-checked here against recomputation
    rng = random.Random(37)
    checked = 0
    for _ in range(100):
        n = rng.randint(6, 16)
        m = rng.randint(3, 6)
        p = [rng.randint(1, 10) for _ in range(n)]
        w = [rng.randint(1, 9) for _ in range(n)]
        d = [rng.randint(0, sum(p) // m) for _ in range(n)]
        inst = make_instance(p, w, d, m)
        s = random_schedule(rng, inst)
        graph = build_improvement_graph(s)
        matching = best_matching(graph)
        out = n2_step(s)
        if out is None:
            assert not matching
            continue
        checked += 1
        predicted = matching_weight(graph, matching)
        assert s.cost - out.cost == predicted
        assert out.cost == schedule_cost(out.machines, inst)
        assert sorted(j for ms in out.machines for j in ms) == list(range(1, n + 1))
    assert checked >= 30  # the loop must actually exercise the move path


def test_full_descent_reaches_pairwise_local_optimum():
    rng = random.Random(41)
    for _ in range(12):
        n = rng.randint(6, 14)
        m = rng.randint(2, 4)
        p = [rng.randint(1, 10) for _ in range(n)]
        w = [rng.randint(1, 9) for _ in range(n)]
        d = [rng.randint(0, sum(p) // m) for _ in range(n)]
        inst = make_instance(p, w, d, m)
        s = random_schedule(rng, inst)
        out = full_descent_n2(s)
        assert out.cost <= s.cost
        # exhaustive: no machine pair admits a positive move
        for a in range(m):
            for b in range(a + 1, m):
                assert enumerate_pair_moves(out, a, b) <= 0
        # and n2_step agrees it is a fixpoint
        assert n2_step(out) is None


def test_full_descent_costs_strictly_decrease():
    rng = random.Random(53)
    inst = make_instance([9, 8, 7, 1, 2, 3], [5, 4, 3, 2, 1, 1],
                         [0, 0, 0, 1, 1, 1], m=3)
    s = Schedule(inst, [[1, 2, 3, 4, 5, 6], [], []])
    costs = [s.cost]
    cur = s
    while True:
        nxt = n2_step(cur)
        if nxt is None:
            break
        assert nxt.cost < costs[-1]
        costs.append(nxt.cost)
        cur = nxt
    assert full_descent_n2(s).cost == costs[-1]
