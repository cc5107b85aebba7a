"""Shortest path as cardinality-minimal SAT over four reachability encodings.

All variants share edge-selection atoms and minimize the number of selected
edges.  They differ in how "target is reached" is axiomatized:

  1  binary reaches relation closed under a ternary join
     (reaches(x,z) & reaches(z,y) -> reaches(x,y), ground instances cubic
     in the node count),
  2  binary reaches closed under single-edge extension
     (edgeOnPath(x,z) & reaches(z,y) -> reaches(x,y), edge_count * n
     instances),
  3  unary reachable-from-source with the same path-shape constraints,
  4  unary reachable only: no path-shape constraints at all, correctness
     rests entirely on the founded reachability definition.

Variants 1-3 constrain selected edges to form a simple source-to-target
path (nothing enters the source, nothing leaves the target, in/out degree
at most one, every selected edge reached from the source).
"""

from __future__ import annotations

import random
import time
from dataclasses import dataclass
from typing import NamedTuple

from .encoding import (
    NoModelError,
    add_at_most,
    add_founded_atoms,
    level_width,
    minimize_cardinality,
)
from .errors import InputError
from .formula import CnfFormula

VARIANTS = (1, 2, 3, 4)


@dataclass(frozen=True)
class DiGraph:
    nodes: tuple
    edges: frozenset
    source: object
    target: object

    def __post_init__(self):
        ns = set(self.nodes)
        if len(ns) != len(self.nodes):
            raise ValueError("duplicate nodes")
        if self.source not in ns or self.target not in ns:
            raise ValueError("source/target must be nodes")
        for (u, v) in self.edges:
            if u not in ns or v not in ns:
                raise ValueError(f"edge ({u!r},{v!r}) leaves the node set")

    @property
    def self_loops(self):
        return frozenset((u, v) for (u, v) in self.edges if u == v)


def digraph(nodes, edges, source, target) -> DiGraph:
    return DiGraph(tuple(nodes), frozenset(tuple(e) for e in edges), source, target)


@dataclass
class EncodingStats:
    variant: int
    num_vars: int
    num_clauses: int
    encode_ms: float
    solve_ms: float | None = None


class PathResult(NamedTuple):
    length: int
    edges: tuple


def bfs_oracle(g: DiGraph):
    """Unweighted shortest-path length by breadth-first search, or None."""
    if g.source == g.target:
        return 0
    succ = {u: [] for u in g.nodes}
    for (u, v) in g.edges:
        succ[u].append(v)
    dist = {g.source: 0}
    queue = [g.source]
    while queue:
        nxt = []
        for u in queue:
            for v in succ[u]:
                if v not in dist:
                    dist[v] = dist[u] + 1
                    if v == g.target:
                        return dist[v]
                    nxt.append(v)
        queue = nxt
    return None


def _path_shape_constraints(f, g, sel, reached_lit_of):
    """Constraints shared by variants 1-3.

    Nothing enters the source or leaves the target; per-node in/out degree
    at most one; every selected edge's head is reached from the source
    (reached_lit_of(y) supplies the per-node "reached" literal).
    """
    for (u, v), lit in sel.items():
        if v == g.source:
            f.add_clause((-lit,))
        if u == g.target:
            f.add_clause((-lit,))
    incoming = {x: [] for x in g.nodes}
    outgoing = {x: [] for x in g.nodes}
    for (u, v), lit in sel.items():
        outgoing[u].append(lit)
        incoming[v].append(lit)
    for x in g.nodes:
        add_at_most(f, incoming[x], 1)
        add_at_most(f, outgoing[x], 1)
    for (u, v), lit in sel.items():
        f.add_clause((-lit, reached_lit_of(v)))


def _binary_reaches(f, g, sel, forward: bool):
    """Founded binary reaches(x,y) = directed selected path of length >= 1.

    The least fixpoint is pinned row-wise: with forward=True each source row
    x is grounded as reaches(x,y) <- reaches(x,z) & sel(z,y) (variant 1
    support); with forward=False each target column y is grounded as
    reaches(x,y) <- sel(x,z) & reaches(z,y), which is the variant 2 rule.
    """
    nodes = g.nodes
    atoms = {}
    for x in nodes:
        for y in nodes:
            atoms[(x, y)] = f.atom("reaches", x, y)
    in_nbrs = {y: [] for y in nodes}
    out_nbrs = {x: [] for x in nodes}
    for (u, v) in g.edges:
        in_nbrs[v].append(u)
        out_nbrs[u].append(v)
    base = {}
    rec = {}
    for x in nodes:
        for y in nodes:
            base[(x, y)] = [sel[(x, y)]] if (x, y) in sel else []
            if forward:
                rec[(x, y)] = [((x, z), sel[(z, y)]) for z in in_nbrs[y]]
            else:
                rec[(x, y)] = [((z, y), sel[(x, z)]) for z in out_nbrs[x]]
    # every support chain walks selected edges, so one node-level order
    # shared across rows suffices to rule out circular support
    order = {k: (k[1] if forward else k[0]) for k in atoms}
    add_founded_atoms(
        f, atoms, base, rec, level_width(len(nodes)), order_groups=order
    )
    return atoms


def encode_variant(g: DiGraph, variant: int):
    """Build the CNF for one variant.

    Returns (formula, objective_literals, stats); the objective literals are
    the edge-selection atoms.  Models project onto edge selections that form
    a simple source-to-target path (variants 1-3) or any founded edge set
    connecting source to target (variant 4).
    """
    if variant not in VARIANTS:
        raise ValueError(f"unknown variant {variant}")
    t0 = time.perf_counter()
    f = CnfFormula()
    sel = {(u, v): f.atom("edgeOnPath", u, v) for (u, v) in sorted(g.edges, key=repr)}

    if variant in (1, 2):
        reaches = _binary_reaches(f, g, sel, forward=(variant == 1))
        if variant == 1:
            # ternary join, grounded over all node triples
            for x in g.nodes:
                for z in g.nodes:
                    if z == x:
                        continue
                    rxz = reaches[(x, z)]
                    for y in g.nodes:
                        if y == z:
                            continue
                        f.add_clause((-rxz, -reaches[(z, y)], reaches[(x, y)]))
        f.add_clause((reaches[(g.source, g.target)],))
        _path_shape_constraints(f, g, sel, lambda y: reaches[(g.source, y)])
    else:
        atoms = {y: f.atom("reachable", y) for y in g.nodes}
        rec = {y: [] for y in g.nodes}
        for (u, v), lit in sel.items():
            rec[v].append((u, lit))
        add_founded_atoms(
            f, atoms, {}, rec, level_width(len(g.nodes)),
            fixed_true=(g.source,), order_groups={y: y for y in g.nodes},
        )
        f.add_clause((atoms[g.target],))
        if variant == 3:
            _path_shape_constraints(f, g, sel, lambda y: atoms[y])

    objective = [sel[e] for e in sorted(sel, key=repr)]
    stats = EncodingStats(
        variant=variant,
        num_vars=f.num_vars,
        num_clauses=f.num_clauses,
        encode_ms=(time.perf_counter() - t0) * 1000.0,
    )
    return f, objective, stats


def solve_shortest_path(g: DiGraph, variant: int, seed: int = 0, stats=None):
    """Minimum-length source-to-target path, or None when unreachable.

    When source == target the empty path is returned without touching the
    solver.  `stats` may be an EncodingStats to receive the solve time.
    """
    if g.source == g.target:
        return PathResult(0, ())
    f, objective, enc_stats = encode_variant(g, variant)
    if stats is not None:
        stats.variant = enc_stats.variant
        stats.num_vars = enc_stats.num_vars
        stats.num_clauses = enc_stats.num_clauses
        stats.encode_ms = enc_stats.encode_ms
    t0 = time.perf_counter()
    try:
        result = minimize_cardinality(f, objective, seed=seed)
    except NoModelError:
        return None
    finally:
        if stats is not None:
            stats.solve_ms = (time.perf_counter() - t0) * 1000.0
    model = result.model
    chosen = [e for e, lit in
              ((e, f.symbols.var_of(("edgeOnPath", *e))) for e in sorted(g.edges, key=repr))
              if model[lit]]
    succ = {}
    for (u, v) in chosen:
        if u in succ:
            raise AssertionError("solution is not a simple path")
        succ[u] = v
    path = []
    cur = g.source
    while cur != g.target:
        nxt = succ.pop(cur)
        path.append((cur, nxt))
        cur = nxt
    if succ or len(path) != result.count:
        raise AssertionError("solution edges do not form a single path")
    return PathResult(result.count, tuple(path))


def random_digraph(n: int, density: float, seed) -> DiGraph:
    """Seeded random digraph with distinct random source and target."""
    rng = seed if isinstance(seed, random.Random) else random.Random(seed)
    nodes = tuple(range(n))
    edges = [
        (u, v)
        for u in nodes
        for v in nodes
        if u != v and rng.random() < density
    ]
    source, target = rng.sample(nodes, 2)
    return digraph(nodes, edges, source, target)


# ----------------------------------------------------------------------
# file format: "n m" header, m edge lines "u v", then one "from to" line


def parse_graph(text: str, path: str = "<graph>") -> DiGraph:
    rows = []
    for ln, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if line:
            rows.append((ln, line))
    if not rows:
        raise InputError(path, 1, "empty graph file")
    ln, header = rows[0]
    parts = header.split()
    if len(parts) != 2:
        raise InputError(path, ln, "expected header 'n m'")
    try:
        n, m = int(parts[0]), int(parts[1])
    except ValueError:
        raise InputError(path, ln, "expected header 'n m'") from None
    if n <= 0 or m < 0:
        raise InputError(path, ln, "need n > 0 and m >= 0")
    if len(rows) != m + 2:
        raise InputError(path, ln, f"expected {m} edge lines plus a 'from to' line")
    edges = []
    for ln, line in rows[1 : m + 1]:
        parts = line.split()
        try:
            u, v = int(parts[0]), int(parts[1])
        except (ValueError, IndexError):
            raise InputError(path, ln, f"bad edge line {line!r}") from None
        if len(parts) != 2 or not (0 <= u < n and 0 <= v < n):
            raise InputError(path, ln, f"bad edge line {line!r}")
        edges.append((u, v))
    ln, line = rows[m + 1]
    parts = line.split()
    try:
        s, t = int(parts[0]), int(parts[1])
    except (ValueError, IndexError):
        raise InputError(path, ln, f"bad 'from to' line {line!r}") from None
    if len(parts) != 2 or not (0 <= s < n and 0 <= t < n):
        raise InputError(path, ln, f"bad 'from to' line {line!r}")
    return digraph(range(n), edges, s, t)


def read_graph(path) -> DiGraph:
    with open(path) as fh:
        return parse_graph(fh.read(), str(path))


def format_graph(g: DiGraph) -> str:
    index = {x: i for i, x in enumerate(g.nodes)}
    lines = ["%d %d" % (len(g.nodes), len(g.edges))]
    for (u, v) in sorted(g.edges, key=lambda e: (index[e[0]], index[e[1]])):
        lines.append("%d %d" % (index[u], index[v]))
    lines.append("%d %d" % (index[g.source], index[g.target]))
    return "\n".join(lines) + "\n"
