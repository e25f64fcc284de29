"""Shared builders for the test suite."""

from pmtwt import Instance, Job, Schedule


def make_instance(p, w, d, m=1):
    jobs = [Job(i + 1, p[i], w[i], d[i]) for i in range(len(p))]
    return Instance(jobs, m)


def random_instance(rng, n, m, pmax=20, dspread=None):
    """Small instance with uniform data; due dates roughly half the load.

    dspread="loose" puts every due date at or past the total load, so any
    schedule whatsoever has cost zero.
    """
    p = [rng.randint(1, pmax) for _ in range(n)]
    w = [rng.randint(1, 10) for _ in range(n)]
    total = sum(p)
    if dspread == "loose":
        d = [rng.randint(total, 2 * total) for _ in range(n)]
    else:
        hi = dspread if dspread is not None else max(1, total // max(1, m))
        d = [rng.randint(0, hi) for _ in range(n)]
    return make_instance(p, w, d, m)


def random_schedule(rng, instance):
    """Random assignment and order of all jobs of `instance`."""
    machines = [[] for _ in range(instance.m)]
    for j in range(1, instance.n + 1):
        machines[rng.randrange(instance.m)].append(j)
    for seq in machines:
        rng.shuffle(seq)
    return Schedule(instance, machines)


def seq_cost(seq, instance, t=0):
    """Reference single-machine objective, written independently of model."""
    cost = 0
    for j in seq:
        t += instance.p[j]
        if t > instance.d[j]:
            cost += instance.w[j] * (t - instance.d[j])
    return cost


def schedule_cost(machines, instance):
    return sum(seq_cost(seq, instance) for seq in machines)
