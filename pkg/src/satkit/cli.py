"""Command-line front end.

Subcommands solve single instances from files (shortest-path, mcs, dfa),
run batch checks (stemma), and benchmark encoding sizes (bench).  Every
subcommand prints a short summary to stdout and can write a
machine-readable report with --json (or --csv for bench).  Exit codes:
0 success, 1 no model / infeasible, 2 malformed input.
"""

import argparse
import csv
import io
import json
import os
import sys
import time
from concurrent.futures import ProcessPoolExecutor

from .dfa import dfa_to_dot, find_min_dfa, read_sample
from .encoding import NoModelError
from .errors import InputError
from .shortest_path import EncodingStats, random_digraph, read_graph, solve_shortest_path
from .solver import SolveBudgetExceeded
from .stemma import check_consistency, minimize_sources, read_features, read_stemma
from .supergraph import exact_mcs, greedy_mcs, read_instance

VARIANTS = (1, 2, 3, 4)


def _seed(explicit=None) -> int:
    """Explicit flag first, then the SATKIT_SEED environment variable."""
    if explicit is not None:
        return explicit
    return int(os.environ.get("SATKIT_SEED", "0"))


def _write_json(path, payload) -> None:
    if not path:
        return
    text = json.dumps(payload, indent=2, sort_keys=True) + "\n"
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(text)


def _map_jobs(fn, tasks, jobs):
    if jobs <= 1 or len(tasks) <= 1:
        return [fn(t) for t in tasks]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(fn, tasks))


# ----------------------------------------------------------------------
# shortest-path


def _run_shortest_path(args) -> int:
    g = read_graph(args.graph)
    seed = _seed()
    variants = VARIANTS if args.variant == "all" else (int(args.variant),)
    records = []
    feasible = True
    for v in variants:
        stats = EncodingStats(v, 0, 0, 0.0)
        res = solve_shortest_path(g, v, seed=seed, stats=stats)
        records.append(
            {
                "variant": v,
                "length": None if res is None else res.length,
                "edges": [] if res is None else [list(e) for e in res.edges],
                "vars": stats.num_vars,
                "clauses": stats.num_clauses,
                "encode_ms": stats.encode_ms,
                "solve_ms": stats.solve_ms,
            }
        )
        if res is None:
            feasible = False
            print(f"variant {v}: no path from {g.source} to {g.target}")
        else:
            print(f"variant {v}: length {res.length}")
    _write_json(
        args.json,
        {
            "kind": "shortest-path",
            "instance": args.graph,
            "source": g.source,
            "target": g.target,
            "records": records,
        },
    )
    return 0 if feasible else 1


# ----------------------------------------------------------------------
# stemma


def _check_one(task):
    s, f, seed = task
    return check_consistency(s, f, seed=seed)


def _minimize_one(task):
    s, f, seed = task
    return minimize_sources(s, f, seed=seed)


def _run_stemma(args) -> int:
    st = read_stemma(args.stemma)
    feats = read_features(args.features)
    seed = _seed()
    tasks = [(st, f, seed) for f in feats]
    t0 = time.perf_counter()
    records = []
    if args.mode == "check":
        positive = 0
        for i, wit in enumerate(_map_jobs(_check_one, tasks, args.jobs)):
            rec = {"feature": i, "consistent": wit is not None}
            if wit is not None:
                positive += 1
                rec["coloring"] = dict(sorted(wit.coloring.items()))
                rec["sources"] = dict(sorted(wit.sources.items()))
            records.append(rec)
        elapsed = time.perf_counter() - t0
        print(f"Found {positive} positive out of {len(feats)} groupings in {round(elapsed)} sec.")
        summary = {"positive": positive, "total": len(feats)}
    else:
        for i, sm in enumerate(_map_jobs(_minimize_one, tasks, args.jobs)):
            records.append(
                {
                    "feature": i,
                    "k_min": sm.count,
                    "coloring": dict(sorted(sm.coloring.items())),
                    "origins": sorted(sm.sources),
                    "optimal": sm.optimal,
                }
            )
            origins = ", ".join(sorted(sm.sources))
            print(f"feature {i}: {sm.count} sources ({origins})")
        elapsed = time.perf_counter() - t0
        print(f"Minimized {len(feats)} groupings in {round(elapsed)} sec.")
        summary = {"total": len(feats)}
    _write_json(
        args.json,
        {
            "kind": f"stemma-{args.mode}",
            "stemma": args.stemma,
            "features": args.features,
            "records": records,
            "summary": summary,
        },
    )
    return 0


# ----------------------------------------------------------------------
# mcs


def _run_mcs(args) -> int:
    graphs, names = read_instance(args.instance)
    seed = _seed()
    solve = exact_mcs if args.mode == "exact" else greedy_mcs
    t0 = time.perf_counter()
    res = solve(graphs, names, seed=seed, time_budget=args.time_budget)
    elapsed_ms = (time.perf_counter() - t0) * 1000.0
    arcs = sorted(res.supergraph.arcs)
    if res.optimal:
        tag = "optimal"
    else:
        tag = "best within budget" if args.mode == "exact" else "upper bound"
    print(f"{args.mode} supergraph: {len(arcs)} arcs ({tag})")
    for a, b in arcs:
        print(f"  {a} -- {b}")
    _write_json(
        args.json,
        {
            "kind": "mcs",
            "mode": args.mode,
            "instance": args.instance,
            "names": list(names),
            "arc_count": len(arcs),
            "arcs": [list(a) for a in arcs],
            "family": [
                {str(v): nm for v, nm in sorted(lab.items())} for lab in res.family
            ],
            "optimal": res.optimal,
            "solve_ms": elapsed_ms,
        },
    )
    return 0


# ----------------------------------------------------------------------
# dfa


def _run_dfa(args) -> int:
    smp, pre = read_sample(args.sample)
    seed = _seed()
    res = find_min_dfa(
        smp,
        redundant=args.redundant,
        objective=args.objective,
        seed=seed,
        precolored=pre or None,
    )
    d = res.dfa
    print(f"{d.num_states} states, {len(d.trans)} transitions, start q{d.start}, "
          f"accepting {{{', '.join('q%d' % q for q in sorted(d.accepting))}}}")
    if args.emit_dot:
        dot = dfa_to_dot(d)
        if args.emit_dot == "-":
            print(dot, end="")
        else:
            with open(args.emit_dot, "w", encoding="utf-8") as fh:
                fh.write(dot)
    _write_json(
        args.json,
        {
            "kind": "dfa-learn",
            "instance": args.sample,
            "objective": args.objective,
            "redundant": args.redundant,
            "states": d.num_states,
            "start": d.start,
            "accepting": sorted(d.accepting),
            "transitions": sorted([q, sym, z] for (q, sym), z in d.trans.items()),
            "clique": list(res.clique),
            "vars": res.num_vars,
            "clauses": res.num_clauses,
            "optimal": res.optimal,
        },
    )
    return 0


# ----------------------------------------------------------------------
# bench


def _bench_one(task):
    n, variant, density, seed = task
    g = random_digraph(n, density, seed)
    stats = EncodingStats(variant, 0, 0, 0.0)
    solve_shortest_path(g, variant, seed=seed, stats=stats)
    return {
        "n": n,
        "variant": variant,
        "vars": stats.num_vars,
        "clauses": stats.num_clauses,
        "encode_ms": round(stats.encode_ms, 3),
        "solve_ms": round(stats.solve_ms or 0.0, 3),
    }


_BENCH_COLUMNS = ("n", "variant", "vars", "clauses", "encode_ms", "solve_ms")


def _plot_bench(records, path) -> None:
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    fig, (ax1, ax2) = plt.subplots(1, 2, figsize=(9, 4))
    for v in VARIANTS:
        pts = [(r["n"], r["clauses"], r["solve_ms"]) for r in records if r["variant"] == v]
        ns = [p[0] for p in pts]
        ax1.plot(ns, [p[1] for p in pts], marker="o", label=f"variant {v}")
        ax2.plot(ns, [p[2] for p in pts], marker="o", label=f"variant {v}")
    ax1.set(xlabel="nodes", ylabel="clauses", yscale="log")
    ax2.set(xlabel="nodes", ylabel="solve ms")
    ax1.legend()
    fig.tight_layout()
    fig.savefig(path)
    plt.close(fig)


def _run_bench(args) -> int:
    try:
        sizes = [int(tok) for tok in args.sizes.split(",") if tok.strip()]
    except ValueError:
        raise InputError("<sizes>", 0, f"bad --sizes value {args.sizes!r}") from None
    if not sizes or sizes != sorted(sizes):
        raise InputError("<sizes>", 0, "--sizes must be ascending")
    seed = _seed(args.seed)
    tasks = [(n, v, args.density, seed) for n in sizes for v in VARIANTS]
    records = _map_jobs(_bench_one, tasks, args.jobs)
    if args.no_times:
        for r in records:
            r["encode_ms"] = 0.0
            r["solve_ms"] = 0.0
    out = io.StringIO()
    writer = csv.DictWriter(out, fieldnames=_BENCH_COLUMNS, lineterminator="\n")
    writer.writeheader()
    writer.writerows(records)
    text = out.getvalue()
    if args.csv:
        with open(args.csv, "w", encoding="utf-8") as fh:
            fh.write(text)
        print(f"wrote {len(records)} records to {args.csv}")
    else:
        print(text, end="")
    if args.plot:
        _plot_bench(records, args.plot)
        print(f"plot written to {args.plot}")
    return 0


# ----------------------------------------------------------------------
# dispatch


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="satkit",
        description="SAT-backed solvers: shortest paths, stemmata, supergraphs, DFA learning.",
    )
    sub = p.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("shortest-path", help="minimum path length in a digraph file")
    sp.add_argument("graph", help="edge-list file: 'n m' header, edges, then 'from to'")
    sp.add_argument("--variant", choices=["1", "2", "3", "4", "all"], default="3")
    sp.add_argument("--json", metavar="PATH")
    sp.set_defaults(func=_run_shortest_path)

    st = sub.add_parser("stemma", help="check or minimize variant origins over a stemma")
    stsub = st.add_subparsers(dest="mode", required=True)
    for mode in ("check", "min-sources"):
        m = stsub.add_parser(mode)
        m.add_argument("stemma", help="dot file of copiedBy edges")
        m.add_argument("features", help="json array of manuscript->variant maps")
        m.add_argument("--jobs", type=int, default=1)
        m.add_argument("--json", metavar="PATH")
        m.set_defaults(func=_run_stemma, mode=mode)

    mc = sub.add_parser("mcs", help="minimum common supergraph of partially labeled trees")
    mcsub = mc.add_subparsers(dest="mode", required=True)
    for mode in ("exact", "greedy"):
        m = mcsub.add_parser(mode)
        m.add_argument("instance", help="json instance with n, names, graphs")
        m.add_argument("--time-budget", type=float, default=None, metavar="SECONDS")
        m.add_argument("--json", metavar="PATH")
        m.set_defaults(func=_run_mcs, mode=mode)

    df = sub.add_parser("dfa", help="learn a minimal consistent automaton")
    dfsub = df.add_subparsers(dest="mode", required=True)
    le = dfsub.add_parser("learn")
    le.add_argument("sample", help="abbadingo sample file")
    le.add_argument("--redundant", action="store_true")
    le.add_argument("--objective", choices=["states", "transitions"], default="states")
    le.add_argument("--emit-dot", nargs="?", const="-", default=None, metavar="PATH")
    le.add_argument("--json", metavar="PATH")
    le.set_defaults(func=_run_dfa)

    be = sub.add_parser("bench", help="encoding-size and timing benchmarks")
    besub = be.add_subparsers(dest="mode", required=True)
    bs = besub.add_parser("shortest-path")
    bs.add_argument("--sizes", default="8,12,16", help="comma-separated ascending node counts")
    bs.add_argument("--density", type=float, default=0.2)
    bs.add_argument("--seed", type=int, default=None)
    bs.add_argument("--csv", metavar="PATH")
    bs.add_argument("--plot", metavar="PATH")
    bs.add_argument("--no-times", action="store_true", help="zero timing columns (stable output)")
    bs.add_argument("--jobs", type=int, default=1)
    bs.set_defaults(func=_run_bench)

    return p


def dispatch(argv) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except SolveBudgetExceeded:
        print("time budget exhausted before a first solution", file=sys.stderr)
        return 1
    except NoModelError as e:
        print(str(e), file=sys.stderr)
        return 1
    except ValueError as e:  # includes InputError
        print(str(e), file=sys.stderr)
        return 2
    except OSError as e:
        print(f"cannot open {e.filename}: {e.strerror}" if e.filename
              else str(e), file=sys.stderr)
        return 2


def main(argv=None) -> int:
    return dispatch(sys.argv[1:] if argv is None else argv)


if __name__ == "__main__":
    sys.exit(main())
