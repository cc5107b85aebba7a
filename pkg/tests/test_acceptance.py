"""End-to-end acceptance checks, one per shipped capability.

Each test prints a single PASS/FAIL verdict line (visible with -s, or in
the failure report) and enforces a wall-clock budget where one is set.
Budgets are generous on purpose: they catch order-of-magnitude
regressions, not scheduler noise.
"""

from __future__ import annotations

import random
import time

from satkit import (
    bfs_oracle,
    check_consistency,
    check_model,
    digraph,
    encode_variant,
    exact_mcs,
    find_min_dfa,
    greedy_mcs,
    minimize_sources,
    plg,
    random_digraph,
    reduce_sat_to_color_connected,
    run_dfa,
    sample,
    solve_shortest_path,
    solve_formula,
    verify_supergraph,
)
from satkit.dfa import brute_force_min_dfa
from satkit.supergraph import brute_force_mcs, random_instance

from generators import random_cnf, random_crdag, random_feature
from oracles import brute_force_stemma, dpll, truth_table_sat

VARIANTS = (1, 2, 3, 4)


def _verdict(tag, ok, detail):
    line = f"{'PASS' if ok else 'FAIL'}: {tag} — {detail}"
    print(line)
    assert ok, line


def test_c1_two_tree_merge():
    t0 = time.perf_counter()
    names = ("n1", "n2", "n3", "n4", "u1", "u2", "u3")
    labels = {0: "n1", 3: "n3", 4: "n4", 6: "n2"}
    g1 = plg(range(7), [(0, 1), (1, 2), (2, 3), (1, 4), (4, 5), (5, 6)], labels)
    g2 = plg(range(7), [(0, 1), (1, 2), (2, 3), (2, 4), (4, 5), (5, 6)], labels)
    res = exact_mcs((g1, g2), names)
    brute = brute_force_mcs((g1, g2), names)
    elapsed = time.perf_counter() - t0
    ok = (
        res.optimal
        and len(res.supergraph.arcs) == 7
        and brute == 7
        and verify_supergraph((g1, g2), res.family, res.supergraph)
        and elapsed < 5.0
    )
    _verdict(
        "C1 two-tree merge",
        ok,
        f"exact={len(res.supergraph.arcs)} brute={brute} ({elapsed:.2f}s, budget 5s)",
    )


def test_c2_minimal_automaton():
    t0 = time.perf_counter()
    s = sample(["a", "abaa", "bb"], ["abb", "b"])
    plain = find_min_dfa(s)
    extra = find_min_dfa(s, redundant=True)
    brute = brute_force_min_dfa(s)
    consistent = all(run_dfa(plain.dfa, w) for w in s.positives) and not any(
        run_dfa(plain.dfa, w) for w in s.negatives
    )
    elapsed = time.perf_counter() - t0
    ok = (
        consistent
        and plain.dfa.num_states == brute
        and extra.dfa.num_states == brute
        and elapsed < 5.0
    )
    _verdict(
        "C2 minimal automaton",
        ok,
        f"states={plain.dfa.num_states} redundant={extra.dfa.num_states} "
        f"brute={brute} ({elapsed:.2f}s, budget 5s)",
    )


def test_c3_path_variants_agree():
    t0 = time.perf_counter()
    g = digraph("ABCD", [("A", "B"), ("B", "C"), ("C", "D"), ("A", "D")],
                "A", "D")
    fixed_ok = all(
        solve_shortest_path(g, v).length == 1 for v in VARIANTS
    )
    agree = 0
    total = 200
    first_bad = None
    for trial in range(total):
        rng = random.Random(trial)
        h = random_digraph(rng.randint(2, 25), 0.2, seed=trial)
        want = bfs_oracle(h)
        got = {
            v: (r.length if (r := solve_shortest_path(h, v, seed=trial)) else None)
            for v in VARIANTS
        }
        if all(l == want for l in got.values()):
            agree += 1
        elif first_bad is None:
            first_bad = (trial, want, got)
    elapsed = time.perf_counter() - t0
    ok = fixed_ok and agree == total and elapsed < 60.0
    _verdict(
        "C3 path variants",
        ok,
        f"fixed={fixed_ok} suite={agree}/{total} first_bad={first_bad} "
        f"({elapsed:.1f}s, budget 60s)",
    )


def test_c4_encoding_size_ordering():
    counts = {}
    for n in (12, 16, 20):
        g = random_digraph(n, 0.2, seed=0)
        counts[n] = {v: encode_variant(g, v)[0].num_clauses for v in VARIANTS}
    ok = all(
        c[3] < c[2] < c[1] and c[4] <= c[3] for c in counts.values()
    )
    _verdict("C4 encoding-size ordering", ok, f"clauses={counts}")


def test_c5_hardness_reduction():
    t0 = time.perf_counter()
    agree = 0
    total = 100
    first_bad = None
    rng = random.Random(500)
    for trial in range(total):
        clauses, nvars = random_cnf(rng, max_vars=8, max_clauses=12)
        sat = truth_table_sat(clauses, nvars)
        st, f = reduce_sat_to_color_connected(clauses)
        completable = check_consistency(st, f, seed=trial) is not None
        if sat == completable:
            agree += 1
        elif first_bad is None:
            first_bad = (trial, sat, completable)
    elapsed = time.perf_counter() - t0
    ok = agree == total and elapsed < 60.0
    _verdict(
        "C5 hardness reduction",
        ok,
        f"{agree}/{total} first_bad={first_bad} ({elapsed:.1f}s, budget 60s)",
    )


def test_c6_stemma_brute_force_parity():
    t0 = time.perf_counter()
    agree = 0
    total = 500
    first_bad = None
    rng = random.Random(600)
    for trial in range(total):
        s = random_crdag(rng, max_nodes=10)
        f = random_feature(rng, s, max_variants=3)
        want_sat, want_k = brute_force_stemma(s, f)
        wit = check_consistency(s, f, seed=trial)
        sm = minimize_sources(s, f, seed=trial)
        distinct = len(set(f.readings.values()))
        good = (
            (wit is not None) == want_sat
            and sm.optimal
            and sm.count == want_k
            and sm.count >= distinct
            and (sm.count == distinct) == want_sat
        )
        if good:
            agree += 1
        elif first_bad is None:
            first_bad = (trial, want_sat, want_k, wit is not None, sm.count)
    elapsed = time.perf_counter() - t0
    ok = agree == total and elapsed < 120.0
    _verdict(
        "C6 stemma brute-force parity",
        ok,
        f"{agree}/{total} first_bad={first_bad} ({elapsed:.1f}s, budget 120s)",
    )


def test_c7_greedy_vs_exact_supergraph():
    t0 = time.perf_counter()
    agree = 0
    total = 100
    first_bad = None
    rng = random.Random(700)
    for trial in range(total):
        k = rng.randint(2, 3)
        n = rng.randint(3, 6)
        graphs, names = random_instance(k, n, rng.randint(0, n), seed=trial)
        exact = exact_mcs(graphs, names, seed=trial)
        greedy = greedy_mcs(graphs, names, seed=trial)
        lo = max(len(g.edges) for g in graphs)
        good = (
            len(greedy.supergraph.arcs) >= len(exact.supergraph.arcs) >= lo
            and verify_supergraph(graphs, exact.family, exact.supergraph)
            and verify_supergraph(graphs, greedy.family, greedy.supergraph)
        )
        if good:
            agree += 1
        elif first_bad is None:
            first_bad = (trial, len(exact.supergraph.arcs),
                         len(greedy.supergraph.arcs), lo)
    elapsed = time.perf_counter() - t0
    ok = agree == total
    _verdict(
        "C7 greedy vs exact supergraph",
        ok,
        f"{agree}/{total} first_bad={first_bad} ({elapsed:.1f}s)",
    )


def test_c8_solver_oracle_parity():
    t0 = time.perf_counter()
    agree = 0
    total = 1000
    first_bad = None
    rng = random.Random(800)
    for trial in range(total):
        clauses, nvars = random_cnf(rng, max_vars=20)
        want = dpll(clauses, nvars) is not None
        from satkit import CnfFormula

        f = CnfFormula()
        f.num_vars = nvars
        for cl in clauses:
            f.add_clause(cl)
        model = solve_formula(f, seed=trial)
        good = (model is not None) == want and (
            model is None or check_model(clauses, model)
        )
        if good:
            agree += 1
        elif first_bad is None:
            first_bad = (trial, want, model is not None)
    elapsed = time.perf_counter() - t0
    ok = agree == total
    _verdict(
        "C8 solver oracle parity",
        ok,
        f"{agree}/{total} first_bad={first_bad} ({elapsed:.1f}s)",
    )
