"""Minimum common supergraph of partially labeled n-graphs.

Every input graph has the same number of vertices and a partial injective
labeling into one shared name set of that same size.  Completing each
labeling to a bijection maps each graph's edges onto name pairs; the union
of those images is a common supergraph over the names.  The task is picking
completions so the union is as small as possible.

`exact_mcs` encodes the completions to SAT and minimizes the number of
induced arcs; `greedy_mcs` merges the inputs two at a time with exact
pairwise solves, which scales far beyond the exact method; both are checked
by `verify_supergraph`, and `brute_force_mcs` enumerates completions
outright as an independent oracle.
"""

from __future__ import annotations

import itertools
import json
import random
from dataclasses import dataclass
from typing import NamedTuple

from .encoding import add_at_most, minimize_cardinality, tseitin_and, tseitin_or
from .errors import InputError
from .formula import CnfFormula


@dataclass(frozen=True)
class PartiallyLabeledGraph:
    vertices: tuple
    edges: frozenset     # canonical (u, v) tuples, u before v in vertex order
    labels: dict         # partial vertex -> name, injective

    def __post_init__(self):
        vs = set(self.vertices)
        if len(vs) != len(self.vertices):
            raise ValueError("duplicate vertices")
        for (u, v) in self.edges:
            if u == v:
                raise ValueError(f"self-edge on {u!r}")
            if u not in vs or v not in vs:
                raise ValueError(f"edge ({u!r},{v!r}) leaves the vertex set")
        if len(set(self.labels.values())) != len(self.labels):
            raise ValueError("labels are not injective")
        for v in self.labels:
            if v not in vs:
                raise ValueError(f"label on unknown vertex {v!r}")

    @property
    def unlabeled(self):
        return tuple(v for v in self.vertices if v not in self.labels)


def plg(vertices, edges, labels=()) -> PartiallyLabeledGraph:
    """Build a graph with edges canonicalized to (earlier, later) vertex order."""
    vertices = tuple(vertices)
    pos = {v: i for i, v in enumerate(vertices)}
    canon = set()
    for (u, v) in edges:
        if u in pos and v in pos and pos[u] > pos[v]:
            u, v = v, u
        canon.add((u, v))
    return PartiallyLabeledGraph(vertices, frozenset(canon), dict(labels))


class Supergraph(NamedTuple):
    names: tuple
    arcs: frozenset   # (a, b) name pairs, a strictly before b in names order


class McsResult(NamedTuple):
    supergraph: Supergraph
    family: list      # one total vertex -> name bijection per input graph
    optimal: bool


def _check_inputs(graphs, names):
    names = tuple(names)
    if len(set(names)) != len(names):
        raise ValueError("duplicate names")
    n = len(names)
    if not graphs:
        raise ValueError("no graphs given")
    for g in graphs:
        if len(g.vertices) != n:
            raise ValueError(f"graph has {len(g.vertices)} vertices, expected {n}")
        for nm in g.labels.values():
            if nm not in names:
                raise ValueError(f"label {nm!r} is not a declared name")
    return names


def _arc_of(names_pos, a, b):
    return (a, b) if names_pos[a] < names_pos[b] else (b, a)


def induced_arcs(g: PartiallyLabeledGraph, labeling: dict, names_pos: dict) -> set:
    return {
        _arc_of(names_pos, labeling[u], labeling[v]) for (u, v) in g.edges
    }


def exact_mcs(graphs, names, seed: int = 0, time_budget=None) -> McsResult:
    """Smallest arc count over all labeling completions, by SAT minimization.

    Per graph, unlabeled vertices take the names its partial labeling left
    free, one-hot both ways (a bijection).  Each (edge, name pair) match is
    a defined gate; an arc holds iff some edge of some graph matches it.
    The arc atoms are the minimization objective.
    """
    names = _check_inputs(graphs, names)
    names_pos = {nm: i for i, nm in enumerate(names)}
    cnf = CnfFormula()

    # label variables over the free names of each graph
    lab = []   # per graph: dict (vertex, name) -> literal, fixed ones omitted
    for t, g in enumerate(graphs):
        free_names = [nm for nm in names if nm not in g.labels.values()]
        unlabeled = g.unlabeled
        atoms = {}
        for v in unlabeled:
            row = [cnf.atom("label", t, v, nm) for nm in free_names]
            for nm, lit in zip(free_names, row):
                atoms[(v, nm)] = lit
            cnf.add_clause(row)
            add_at_most(cnf, row, 1)
        for nm in free_names:
            col = [atoms[(v, nm)] for v in unlabeled]
            cnf.add_clause(col)
            add_at_most(cnf, col, 1)
        lab.append(atoms)

    def name_lit(t, v, nm):
        """Literal (or bool) for vertex v of graph t carrying name nm."""
        g = graphs[t]
        if v in g.labels:
            return g.labels[v] == nm
        if nm in g.labels.values():
            return False
        return lab[t][(v, nm)]

    arcs = {
        (a, b): cnf.atom("arc", a, b)
        for (a, b) in itertools.combinations(names, 2)
    }
    matches = {pair: [] for pair in arcs}
    for t, g in enumerate(graphs):
        for (u, v) in sorted(g.edges, key=repr):
            for (a, b) in arcs:
                ways = []
                for (x, y) in ((u, v), (v, u)):
                    la, lb = name_lit(t, x, a), name_lit(t, y, b)
                    if la is False or lb is False:
                        continue
                    if la is True and lb is True:
                        ways.append(True)
                    elif la is True:
                        ways.append(lb)
                    elif lb is True:
                        ways.append(la)
                    else:
                        ways.append(tseitin_and(cnf, (la, lb)))
                # identity checks: literal 1 must not be mistaken for True
                if any(w is True for w in ways):
                    matches[(a, b)].append(True)
                elif ways:
                    matches[(a, b)].append(tseitin_or(cnf, ways))
    objective = []
    for pair, lit in arcs.items():
        ms = matches[pair]
        if any(m is True for m in ms):
            cnf.add_clause((lit,))
        elif ms:
            for m in ms:
                cnf.add_clause((-m, lit))
            cnf.add_clause([-lit] + ms)
        else:
            cnf.add_clause((-lit,))
        objective.append(lit)

    res = minimize_cardinality(cnf, objective, seed=seed, time_budget=time_budget)
    family = []
    for t, g in enumerate(graphs):
        total = dict(g.labels)
        for (v, nm), lit in lab[t].items():
            if res.model[lit]:
                total[v] = nm
        family.append(total)
    chosen = frozenset(pair for pair, lit in arcs.items() if res.model[lit])
    return McsResult(Supergraph(names, chosen), family, res.optimal)


def greedy_mcs(graphs, names, seed: int = 0, time_budget=None) -> McsResult:
    """Merge-two-at-a-time approximation.

    All pairs are solved exactly; the smallest pairwise supergraph seeds the
    accumulator, which is then repeatedly merged (again exactly) with
    whichever remaining graph keeps it smallest.  The accumulator enters the
    pairwise solves as a fully self-labeled graph over the names.  Ties pick
    the lowest input index.  Arc counts can only match or exceed the exact
    optimum, so the result is flagged optimal only when that is provable:
    with two inputs the single merge is exact, and with more the arc count
    must hit the largest-input lower bound.
    """
    names = _check_inputs(graphs, names)
    if len(graphs) < 2:
        raise ValueError("greedy merge needs at least two graphs")
    remaining = dict(enumerate(graphs))
    best = None
    for i, j in itertools.combinations(sorted(remaining), 2):
        r = exact_mcs([graphs[i], graphs[j]], names, seed=seed,
                      time_budget=time_budget)
        if best is None or len(r.supergraph.arcs) < len(best[0].supergraph.arcs):
            best = (r, i, j)
    result, i, j = best
    family = {i: result.family[0], j: result.family[1]}
    complete = result.optimal
    del remaining[i], remaining[j]

    while remaining:
        acc = plg(names, result.supergraph.arcs, {nm: nm for nm in names})
        step = None
        for k in sorted(remaining):
            r = exact_mcs([acc, remaining[k]], names, seed=seed,
                          time_budget=time_budget)
            if step is None or len(r.supergraph.arcs) < len(step[0].supergraph.arcs):
                step = (r, k)
        result, k = step
        family[k] = result.family[1]
        complete = complete and result.optimal
        del remaining[k]
    arcs = result.supergraph.arcs
    optimal = complete and (len(graphs) == 2
                            or len(arcs) == max(len(g.edges) for g in graphs))
    ordered = [family[t] for t in range(len(graphs))]
    return McsResult(Supergraph(names, arcs), ordered, optimal)


def verify_supergraph(graphs, family, sg: Supergraph) -> bool:
    """Recompute the induced union and check it equals the claimed arcs."""
    names = tuple(sg.names)
    names_pos = {nm: i for i, nm in enumerate(names)}
    if len(family) != len(graphs):
        return False
    union = set()
    for g, labeling in zip(graphs, family):
        if set(labeling) != set(g.vertices):
            return False
        if sorted(labeling.values(), key=repr) != sorted(names, key=repr):
            return False   # not a bijection onto the names
        if any(labeling[v] != nm for v, nm in g.labels.items()):
            return False   # does not extend the given partial labels
        union |= induced_arcs(g, labeling, names_pos)
    return union == set(sg.arcs)


def brute_force_mcs(graphs, names, limit: int = 6) -> int:
    """Exact minimum arc count by enumerating every labeling completion."""
    names = _check_inputs(graphs, names)
    names_pos = {nm: i for i, nm in enumerate(names)}
    per_graph = []
    for g in graphs:
        un = g.unlabeled
        if len(un) > limit:
            raise ValueError(
                f"{len(un)} unlabeled vertices exceed the enumeration limit {limit}"
            )
        free = [nm for nm in names if nm not in g.labels.values()]
        options = []
        for perm in itertools.permutations(free):
            labeling = dict(g.labels)
            labeling.update(zip(un, perm))
            options.append(frozenset(induced_arcs(g, labeling, names_pos)))
        per_graph.append(sorted(set(options), key=sorted))
    best = None
    for combo in itertools.product(*per_graph):
        size = len(frozenset().union(*combo))
        if best is None or size < best:
            best = size
    return best


def random_instance(num_graphs: int, n: int, num_labels: int, seed: int = 0):
    """Random trees over n vertices sharing num_labels pinned species names."""
    if not 0 <= num_labels <= n:
        raise ValueError("label count out of range")
    rng = random.Random(seed)
    names = [f"s{i}" for i in range(n)]
    graphs = []
    for _ in range(num_graphs):
        edges = [(rng.randrange(i), i) for i in range(1, n)]
        pinned = rng.sample(range(n), num_labels)
        labels = {v: names[i] for i, v in enumerate(pinned)}
        graphs.append(plg(range(n), edges, labels))
    return graphs, tuple(names)


# ----------------------------------------------------------------------
# instance files

def parse_instance(text: str, path: str = "<string>"):
    """JSON instance: {"n": int, "names": [...], "graphs": [{"edges": [[u,v],...],
    "labels": {"vertex": "name", ...}}, ...]}.  Vertices are 0..n-1."""
    try:
        data = json.loads(text)
    except json.JSONDecodeError as e:
        raise InputError(path, e.lineno, e.msg) from e
    try:
        n = int(data["n"])
        names = tuple(str(nm) for nm in data["names"])
        raw_graphs = data["graphs"]
    except (KeyError, TypeError, ValueError) as e:
        raise InputError(path, 1, f"malformed instance: {e}") from e
    if len(names) != n:
        raise InputError(path, 1, f"{len(names)} names for n={n}")
    graphs = []
    for idx, rg in enumerate(raw_graphs):
        try:
            edges = [(int(u), int(v)) for (u, v) in rg.get("edges", [])]
            labels = {int(v): str(nm) for v, nm in rg.get("labels", {}).items()}
            graphs.append(plg(range(n), edges, labels))
        except (TypeError, ValueError) as e:
            raise InputError(path, 1, f"graph {idx}: {e}") from e
    return tuple(graphs), names


def read_instance(path):
    with open(path, encoding="utf-8") as fh:
        return parse_instance(fh.read(), path=str(path))


def format_instance(graphs, names) -> str:
    payload = {
        "n": len(names),
        "names": list(names),
        "graphs": [
            {
                "edges": sorted([list(e) for e in g.edges]),
                "labels": {str(v): nm for v, nm in sorted(g.labels.items(), key=repr)},
            }
            for g in graphs
        ],
    }
    return json.dumps(payload, indent=2, sort_keys=True) + "\n"
