"""Benchmark harness: generate instance batches, run timed comparisons,
summarize result files into tables.

Result files are line-delimited JSON, one self-describing record per run.
A run cell is identified by (instance, mode, seed); rerunning against an
existing results file skips cells that are already present, so interrupted
campaigns can resume.
"""

from __future__ import annotations

import argparse
import json
import math
import re
import sys
from pathlib import Path

from .instances import (
    GRID,
    SplitMix64,
    adapt_to_parallel,
    format_instance,
    generate_instance,
    instance_seeds,
    load_orlib,
    read_instance,
)
from .ils import MODES, SearchConfig, solve

_NAME_RE = re.compile(r"n(\d+)m(\d+)_R([0-9.]+)_T([0-9.]+)_")


def cmd_generate(args) -> int:
    rs = _float_list(args.r)
    ts = _float_list(args.t)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    master = SplitMix64(args.seed)
    entries = []
    for r in rs:
        for t in ts:
            pair_seed = master.next_u64()
            for k, inst_seed in enumerate(instance_seeds(pair_seed, args.count)):
                inst = generate_instance(args.n, args.m, r, t, inst_seed)
                name = f"n{args.n}m{args.m}_R{r:.1f}_T{t:.1f}_{k:02d}.txt"
                with open(out / name, "w", newline="\n") as fh:
                    fh.write(format_instance(inst))
                entries.append(
                    {"file": name, "r": r, "t": t, "index": k, "seed": inst_seed}
                )
    manifest = {
        "n": args.n,
        "m": args.m,
        "count": args.count,
        "master_seed": args.seed,
        "rs": rs,
        "ts": ts,
        "instances": entries,
    }
    with open(out / "manifest.json", "w", newline="\n") as fh:
        json.dump(manifest, fh, indent=2)
        fh.write("\n")
    print(f"wrote {len(entries)} instances and manifest.json to {out}")
    return 0


def cmd_run(args) -> int:
    jobs = []
    for path in args.instances:
        path = Path(path)
        inst = read_instance(path)
        jobs.append((path.stem, inst))
    if args.orlib:
        if args.n is None or args.m is None:
            print("error: --orlib needs --n and --m", file=sys.stderr)
            return 2
        with open(args.orlib) as fh:
            text = fh.read()
        stem = Path(args.orlib).stem
        for k, single in enumerate(load_orlib(text, args.n, source=stem)):
            inst = adapt_to_parallel(single, args.m)
            jobs.append((f"{stem}-{k:03d}", inst))
    if not jobs:
        print("error: no instances given", file=sys.stderr)
        return 2
    modes = [m.strip().upper() for m in args.modes.split(",") if m.strip()]
    for mode in modes:
        if mode not in MODES:
            print(f"error: unknown mode {mode!r}", file=sys.stderr)
            return 2
    seeds = [int(s) for s in args.seeds.split(",") if s.strip()]

    results = Path(args.results)
    done = set()
    if results.exists():
        for rec in _read_records(results):
            done.add((rec["instance"], rec["mode"], rec["seed"]))
    results.parent.mkdir(parents=True, exist_ok=True)

    ran = 0
    with open(results, "a", newline="\n") as fh:
        for name, inst in jobs:
            for mode in modes:
                for seed in seeds:
                    if (name, mode, seed) in done:
                        print(f"skip {name} {mode} seed={seed} (already present)")
                        continue
                    config = SearchConfig(
                        mode=mode,
                        time_limit=args.time_limit,
                        seed=seed,
                        max_no_improve=args.max_no_improve,
                        gamma_max=args.gamma_max,
                        kick_strength=args.kick_strength,
                    )
                    rep = solve(inst, config)
                    rec = _record(name, inst, rep)
                    fh.write(json.dumps(rec, sort_keys=True) + "\n")
                    fh.flush()
                    ran += 1
                    print(
                        f"{name} {mode} seed={seed}: cost={rep.best_cost} "
                        f"ttb={rep.time_to_best:.2f}s descents={rep.descents}"
                    )
    print(f"ran {ran} cells, results in {results}")
    return 0


def _record(name, inst, rep) -> dict:
    r = t = None
    match = _NAME_RE.match(name)
    if match:
        r = float(match.group(3))
        t = float(match.group(4))
    return {
        "instance": name,
        "n": inst.n,
        "m": inst.m,
        "r": r,
        "t": t,
        "mode": rep.mode,
        "seed": rep.seed,
        "time_limit": rep.time_limit,
        "best_cost": rep.best_cost,
        "time_to_best": round(rep.time_to_best, 3),
        "descents": rep.descents,
        "iterations": rep.iterations,
    }


def _read_records(path) -> list[dict]:
    records = []
    with open(path) as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.strip()
            if not line:
                continue
            try:
                records.append(json.loads(line))
            except json.JSONDecodeError:
                raise SystemExit(f"{path}:{lineno}: not a JSON record")
    return records


def deviation(cost: int, best: int) -> float:
    """Percent deviation from the cell's best cost; 0/0 counts as 0."""
    if best == 0:
        return 0.0 if cost == 0 else math.inf
    return 100.0 * (cost - best) / best


def aggregate(records, group_by: str = "nm", strict_wins: bool = False):
    """Summarize run records into table rows.

    Rows are grouped by (n, m) or by (R, T).  For every record the
    deviation is measured against the best cost any mode achieved on that
    instance.  A record counts as best when it matches that cost; with
    `strict_wins` it counts only when it beats every other mode's best on
    the instance.
    """
    if group_by not in ("nm", "rt"):
        raise ValueError(f"group_by must be 'nm' or 'rt', got {group_by!r}")
    best_of = {}
    mode_best = {}
    for rec in records:
        key = rec["instance"]
        best_of[key] = min(best_of.get(key, rec["best_cost"]), rec["best_cost"])
        mk = (key, rec["mode"])
        mode_best[mk] = min(mode_best.get(mk, rec["best_cost"]), rec["best_cost"])
    modes = sorted({rec["mode"] for rec in records})
    groups = {}
    for rec in records:
        if group_by == "nm":
            key = (rec["n"], rec["m"])
        else:
            if rec.get("r") is None or rec.get("t") is None:
                raise ValueError(
                    f"record for {rec['instance']!r} carries no R/T values; "
                    "group by nm instead"
                )
            key = (rec["r"], rec["t"])
        cell = groups.setdefault(key, {mode: [] for mode in modes})
        inst = rec["instance"]
        cost = rec["best_cost"]
        if strict_wins:
            others = [
                mode_best[(inst, mode)]
                for mode in modes
                if mode != rec["mode"] and (inst, mode) in mode_best
            ]
            win = bool(others) and cost < min(others)
        else:
            win = cost == best_of[inst]
        cell[rec["mode"]].append(
            {
                "dev": deviation(cost, best_of[inst]),
                "win": win,
                "cpu": rec["time_to_best"],
                "descents": rec["descents"],
            }
        )
    rows = []
    for key in sorted(groups):
        row = {"key": key, "stats": {}}
        for mode in modes:
            runs = groups[key][mode]
            if not runs:
                row["stats"][mode] = None
                continue
            devs = [r["dev"] for r in runs]
            row["stats"][mode] = {
                "runs": len(runs),
                "avg_dev": sum(devs) / len(devs),
                "max_dev": max(devs),
                "best": sum(1 for r in runs if r["win"]),
                "avg_cpu": sum(r["cpu"] for r in runs) / len(runs),
                "avg_descents": sum(r["descents"] for r in runs) / len(runs),
            }
        rows.append(row)
    return rows, modes


_METRICS = (
    ("avg_dev", "dev%"),
    ("max_dev", "max%"),
    ("best", "#best"),
    ("avg_cpu", "cpu"),
    ("avg_descents", "desc"),
)


def _fmt(metric: str, value) -> str:
    if value is None:
        return "-"
    if metric == "best":
        return str(value)
    if isinstance(value, float) and math.isinf(value):
        return "inf"
    return f"{value:.1f}"


def render_text(rows, modes, group_by: str) -> str:
    key_names = ("n", "m") if group_by == "nm" else ("R", "T")
    header = list(key_names)
    for mode in modes:
        header.extend(f"{label} {mode}" for _, label in _METRICS)
    table = [header]
    for row in rows:
        line = [_key_str(v) for v in row["key"]]
        for mode in modes:
            stats = row["stats"][mode]
            for metric, _ in _METRICS:
                line.append(_fmt(metric, stats[metric]) if stats else "-")
        table.append(line)
    widths = [max(len(r[i]) for r in table) for i in range(len(header))]
    lines = []
    for k, r in enumerate(table):
        lines.append("  ".join(cell.rjust(widths[i]) for i, cell in enumerate(r)))
        if k == 0:
            lines.append("  ".join("-" * widths[i] for i in range(len(header))))
    return "\n".join(lines) + "\n"


def render_csv(rows, modes, group_by: str) -> str:
    key_names = ("n", "m") if group_by == "nm" else ("R", "T")
    header = list(key_names)
    for mode in modes:
        header.extend(f"{metric}_{mode}" for metric, _ in _METRICS)
    lines = [",".join(header)]
    for row in rows:
        cells = [_key_str(v) for v in row["key"]]
        for mode in modes:
            stats = row["stats"][mode]
            for metric, _ in _METRICS:
                cells.append(_fmt(metric, stats[metric]) if stats else "")
        lines.append(",".join(cells))
    return "\n".join(lines) + "\n"


def _key_str(v) -> str:
    return f"{v:.1f}" if isinstance(v, float) else str(v)


def cmd_table(args) -> int:
    records = _read_records(Path(args.results))
    if not records:
        print("error: results file holds no records", file=sys.stderr)
        return 2
    try:
        rows, modes = aggregate(records, args.group_by, args.strict_wins)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    text = render_text(rows, modes, args.group_by)
    sys.stdout.write(text)
    csv_path = Path(args.csv) if args.csv else Path(args.results).with_suffix(".table.csv")
    with open(csv_path, "w", newline="\n") as fh:
        fh.write(render_csv(rows, modes, args.group_by))
    print(f"csv written to {csv_path}")
    return 0


def _float_list(text: str) -> list[float]:
    return [float(v) for v in text.split(",") if v.strip()]


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="pmtwt",
        description="Weighted tardiness scheduling on identical parallel machines",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    g = sub.add_parser("generate", help="write a seeded instance batch")
    g.add_argument("--n", type=int, default=100, help="jobs per instance")
    g.add_argument("--m", type=int, default=4, help="machine count")
    g.add_argument("--seed", type=int, default=1, help="master seed of the batch")
    g.add_argument("--count", type=int, default=5, help="instances per (R, T) pair")
    g.add_argument("--r", default=",".join(str(v) for v in GRID),
                   help="comma list of R values")
    g.add_argument("--t", default=",".join(str(v) for v in GRID),
                   help="comma list of T values")
    g.add_argument("--out", required=True, help="output directory")
    g.set_defaults(func=cmd_generate)

    r = sub.add_parser("run", help="run algorithms and append result records")
    r.add_argument("instances", nargs="*", help="instance files")
    r.add_argument("--orlib", help="single-machine benchmark file")
    r.add_argument("--n", type=int, help="jobs per instance in --orlib file")
    r.add_argument("--m", type=int, help="machine count for --orlib instances")
    r.add_argument("--modes", default="A3", help="comma list from A1,A2,A3")
    r.add_argument("--time-limit", type=float, default=60.0,
                   help="wall clock budget per run, seconds")
    r.add_argument("--seeds", default="1", help="comma list of seeds")
    r.add_argument("--results", required=True, help="JSON lines results file")
    r.add_argument("--max-no-improve", type=int, default=5)
    r.add_argument("--gamma-max", type=int, default=5)
    r.add_argument("--kick-strength", type=int, default=3)
    r.set_defaults(func=cmd_run)

    t = sub.add_parser("table", help="summarize a results file")
    t.add_argument("--results", required=True)
    t.add_argument("--group-by", choices=("nm", "rt"), default="nm")
    t.add_argument("--strict-wins", action="store_true",
                   help="count only strictly better runs as best")
    t.add_argument("--csv", help="path of the CSV twin")
    t.set_defaults(func=cmd_table)

    args = parser.parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
