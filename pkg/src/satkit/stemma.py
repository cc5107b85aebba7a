"""Manuscript-tradition analysis over copy digraphs.

A tradition's copy history is a CRDAG: a connected DAG with a single root
manuscript.  Each feature partially assigns variant readings to the
manuscripts; a feature is consistent with the history when the readings can
be completed so that every variant spreads from a single origin minuscript
down copy edges.  Equivalently, every two manuscripts sharing a reading are
connected through a common same-reading ancestor.

`check_consistency` decides that by SAT, `minimize_sources` finds the
smallest number of independent origins any completion needs, and
`reduce_sat_to_color_connected` is the opposite direction: it turns an
arbitrary CNF into a reading-completion instance, handy as a hard-instance
generator.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass
from typing import NamedTuple

from .encoding import (
    NoModelError,
    add_at_most,
    minimize_cardinality,
    solve_formula,
    tseitin_and,
    tseitin_or,
)
from .errors import InputError
from .formula import CnfFormula


@dataclass(frozen=True)
class Stemma:
    """Copy history: manuscripts plus (parent, child) copy pairs.

    Must be acyclic with exactly one parentless manuscript (the root);
    together these make the graph weakly connected.
    """

    manuscripts: tuple
    copied_by: frozenset

    def __post_init__(self):
        ms = set(self.manuscripts)
        if not ms:
            raise ValueError("a stemma needs at least one manuscript")
        if len(ms) != len(self.manuscripts):
            raise ValueError("duplicate manuscripts")
        for (p, c) in self.copied_by:
            if p not in ms or c not in ms:
                raise ValueError(f"copy pair ({p!r},{c!r}) leaves the manuscript set")
        # Kahn's algorithm; leftovers expose a copy cycle
        indeg = {x: 0 for x in self.manuscripts}
        for (p, c) in self.copied_by:
            indeg[c] += 1
        queue = [x for x in self.manuscripts if indeg[x] == 0]
        seen = 0
        while queue:
            x = queue.pop()
            seen += 1
            for (p, c) in self.copied_by:
                if p == x:
                    indeg[c] -= 1
                    if indeg[c] == 0:
                        queue.append(c)
        if seen != len(self.manuscripts):
            cyc = sorted(str(x) for x, d in indeg.items() if d > 0)
            raise ValueError(f"copy cycle through {', '.join(cyc)}")
        roots = [x for x in self.manuscripts if all(c != x for (_, c) in self.copied_by)]
        if len(roots) != 1:
            names = ", ".join(str(r) for r in roots)
            raise ValueError(f"expected exactly one root manuscript, found {len(roots)}: {names}")

    @property
    def root(self):
        for x in self.manuscripts:
            if all(c != x for (_, c) in self.copied_by):
                return x
        raise AssertionError("validated stemma lost its root")

    def parents(self) -> dict:
        out = {x: [] for x in self.manuscripts}
        for (p, c) in sorted(self.copied_by, key=repr):
            out[c].append(p)
        return out


def stemma(manuscripts, copy_pairs) -> Stemma:
    return Stemma(tuple(manuscripts), frozenset(tuple(e) for e in copy_pairs))


@dataclass(frozen=True)
class Feature:
    """Partial manuscript -> variant map plus the full variant alphabet."""

    readings: dict
    variants: tuple

    def __post_init__(self):
        vs = set(self.variants)
        if len(vs) != len(self.variants):
            raise ValueError("duplicate variants")
        for m, v in self.readings.items():
            if v not in vs:
                raise ValueError(f"reading {v!r} of {m!r} is not a declared variant")


def feature(readings, variants=None) -> Feature:
    if variants is None:
        variants = sorted(set(readings.values()), key=repr)
    return Feature(dict(readings), tuple(variants))


class Witness(NamedTuple):
    coloring: dict   # total manuscript -> variant
    sources: dict    # variant -> origin manuscript, for variants in use


class SourceMinimum(NamedTuple):
    count: int
    coloring: dict
    sources: frozenset
    optimal: bool


def _check_feature(s: Stemma, f: Feature):
    ms = set(s.manuscripts)
    for m in f.readings:
        if m not in ms:
            raise ValueError(f"feature reads unknown manuscript {m!r}")


def _reading_atoms(cnf: CnfFormula, s: Stemma, f: Feature) -> dict:
    """Exactly-one reading atom per manuscript, pinned where the feature is defined."""
    atoms = {}
    for x in s.manuscripts:
        row = [cnf.atom("reading", x, v) for v in f.variants]
        for i, v in enumerate(f.variants):
            atoms[(x, v)] = row[i]
        cnf.add_clause(row)
        add_at_most(cnf, row, 1)
        if x in f.readings:
            cnf.add_clause((atoms[(x, f.readings[x])],))
    return atoms


def _model_coloring(model, atoms, s: Stemma, f: Feature) -> dict:
    coloring = {}
    for x in s.manuscripts:
        for v in f.variants:
            if model[atoms[(x, v)]]:
                coloring[x] = v
                break
    return coloring


def check_consistency(s: Stemma, f: Feature, seed: int = 0):
    """Complete the readings so every variant has a single origin, or None.

    A manuscript that is not its variant's origin must have a parent with
    the same reading; at most one origin is allowed per variant.  Returns a
    Witness with the completed coloring and the origin of every variant in
    use.
    """
    _check_feature(s, f)
    cnf = CnfFormula()
    atoms = _reading_atoms(cnf, s, f)
    parents = s.parents()
    src = {}
    for v in f.variants:
        col = [cnf.atom("sourceOf", v, x) for x in s.manuscripts]
        for x, lit in zip(s.manuscripts, col):
            src[(v, x)] = lit
            cnf.add_clause((-lit, atoms[(x, v)]))
        add_at_most(cnf, col, 1)
    for x in s.manuscripts:
        for v in f.variants:
            clause = [-atoms[(x, v)], src[(v, x)]]
            clause += [atoms[(y, v)] for y in parents[x]]
            cnf.add_clause(clause)
    model = solve_formula(cnf, seed=seed)
    if model is None:
        return None
    coloring = _model_coloring(model, atoms, s, f)
    sources = {v: x for (v, x), lit in src.items() if model[lit]}
    return Witness(coloring, sources)


def check_coloring(s: Stemma, coloring: dict) -> bool:
    """True iff every same-reading pair shares a same-reading ancestor chain.

    Polynomial check: walking same-reading parent links from any manuscript
    must reach a single origin per reading, so a reading is connected
    exactly when one manuscript of that reading lacks a same-reading parent.
    """
    for x in s.manuscripts:
        if x not in coloring:
            raise ValueError(f"coloring misses manuscript {x!r}")
    parents = s.parents()
    origins = {}
    for x in s.manuscripts:
        v = coloring[x]
        if not any(coloring[y] == v for y in parents[x]):
            origins[v] = origins.get(v, 0) + 1
    return all(n == 1 for n in origins.values())


def minimize_sources(s: Stemma, f: Feature, seed: int = 0, time_budget=None):
    """Fewest origin manuscripts over all completions of the readings.

    An origin is a manuscript with no same-reading parent.  Every variant in
    use contributes at least one origin, so the minimum equals the number of
    used variants exactly when the feature is consistent.
    """
    _check_feature(s, f)
    cnf = CnfFormula()
    atoms = _reading_atoms(cnf, s, f)
    parents = s.parents()
    objective = []
    for x in s.manuscripts:
        same = []
        for y in parents[x]:
            per_v = [
                tseitin_and(cnf, (atoms[(y, v)], atoms[(x, v)]),
                            name=f"agree({y},{x},{v})")
                for v in f.variants
            ]
            same.append(tseitin_or(cnf, per_v, name=f"agree({y},{x})"))
        if same:
            lit = tseitin_and(cnf, [-l for l in same], name=f"origin({x})")
        else:
            lit = cnf.atom("origin", x)
            cnf.add_clause((lit,))
        objective.append(lit)
    res = minimize_cardinality(cnf, objective, seed=seed, time_budget=time_budget)
    coloring = _model_coloring(res.model, atoms, s, f)
    origins = frozenset(
        x for x, lit in zip(s.manuscripts, objective)
        if res.model[abs(lit)] == (lit > 0)
    )
    return SourceMinimum(res.count, coloring, origins, res.optimal)


def indirect_ancestors(s: Stemma) -> frozenset:
    """All (x, y) joined by a copy path of two or more steps.

    Materialized once per stemma, procedurally; reusable across features.
    """
    children = {x: [] for x in s.manuscripts}
    for (p, c) in s.copied_by:
        children[p].append(c)
    desc = {}

    def descendants(x):
        if x not in desc:
            acc = set()
            for c in children[x]:
                acc.add(c)
                acc |= descendants(c)
            desc[x] = acc
        return desc[x]

    pairs = set()
    for x in s.manuscripts:
        for c in children[x]:
            pairs.update((x, y) for y in descendants(c))
    return frozenset(pairs)


# ----------------------------------------------------------------------
# hardness reduction: CNF -> partially colored copy digraph

BLACK = "black"
WHITE = "white"

# canonical inconsistent instance, for inputs holding an empty clause
_CONTRADICTION = (
    ("r", "c", "g"),
    (("r", "c"), ("c", "g")),
    {"r": BLACK, "c": WHITE, "g": BLACK},
)


def reduce_sat_to_color_connected(clauses):
    """Turn a CNF (iterable of DIMACS-style literal iterables) into a
    reading-completion instance that is consistent iff the CNF is
    satisfiable.

    The CNF is first normalized so each clause is all-positive or
    all-negative: negative literals -x become fresh positives nx, tied
    down by the clause pair (x | nx) and (-x | -nx).  Positive clauses
    become black-pinned nodes fed by their variables, negative clauses
    white-pinned ones; two pinned hubs fan out to all variable nodes, so
    a variable's completed reading is its truth value (black = true).

    Returns (Stemma, Feature).
    """
    clauses = [tuple(cl) for cl in clauses]
    if any(not cl for cl in clauses):
        ms, pairs, readings = _CONTRADICTION
        return stemma(ms, pairs), feature(dict(readings), (BLACK, WHITE))
    variables = sorted({abs(l) for cl in clauses for l in cl})
    negated = sorted({-l for cl in clauses for l in cl if l < 0})

    def node(v):
        return f"x{v}" if v > 0 else f"nx{-v}"

    positive = [tuple(node(l) for l in cl) for cl in clauses]
    positive += [(node(v), node(-v)) for v in negated]
    negative = [(node(v), node(-v)) for v in negated]

    var_nodes = [node(v) for v in variables] + [node(-v) for v in negated]
    ms = ["r", "a", "b"] + [f"a{i}" for i in range(1, len(positive) + 1)]
    ms += [f"b{i}" for i in range(1, len(negative) + 1)] + var_nodes
    pairs = [("r", "a"), ("r", "b")]
    pairs += [("a", v) for v in var_nodes]
    pairs += [("b", v) for v in var_nodes]
    for i, cl in enumerate(positive, start=1):
        pairs += [(v, f"a{i}") for v in set(cl)]
    for i, cl in enumerate(negative, start=1):
        pairs += [(v, f"b{i}") for v in set(cl)]

    readings = {"r": BLACK, "a": BLACK, "b": WHITE}
    readings.update((f"a{i}", BLACK) for i in range(1, len(positive) + 1))
    readings.update((f"b{i}", WHITE) for i in range(1, len(negative) + 1))
    return stemma(ms, pairs), feature(readings, (BLACK, WHITE))


# ----------------------------------------------------------------------
# input formats

_DOT_EDGE = re.compile(r'^"?([\w.+-]+)"?\s*->\s*"?([\w.+-]+)"?\s*;?$')
_DOT_NODE = re.compile(r'^"?([\w.+-]+)"?\s*;?$')


def parse_stemma(text: str, path: str = "<string>") -> Stemma:
    """Read the supported dot subset: `digraph ... {` edge lines `}`.

    Edge lines look like `A -> B;`; a bare `A;` declares an isolated
    manuscript (only useful for a single-manuscript tradition).
    """
    lines = text.splitlines()
    body = []
    opened = closed = False
    for i, raw in enumerate(lines, start=1):
        line = raw.strip()
        if not line:
            continue
        if not opened:
            if re.fullmatch(r'digraph(\s+"?[\w.+-]+"?)?\s*\{', line):
                opened = True
                continue
            raise InputError(path, i, "expected a digraph header")
        if closed:
            raise InputError(path, i, "content after closing brace")
        if line == "}":
            closed = True
            continue
        body.append((i, line))
    if not opened:
        raise InputError(path, len(lines) or 1, "expected a digraph header")
    if not closed:
        raise InputError(path, len(lines) or 1, "missing closing brace")

    manuscripts = []
    seen = set()

    def declare(name):
        if name not in seen:
            seen.add(name)
            manuscripts.append(name)

    pairs = []
    for i, line in body:
        m = _DOT_EDGE.match(line)
        if m:
            declare(m.group(1))
            declare(m.group(2))
            pairs.append((m.group(1), m.group(2)))
            continue
        m = _DOT_NODE.match(line)
        if m:
            declare(m.group(1))
            continue
        raise InputError(path, i, f"unsupported dot line: {line!r}")
    try:
        return stemma(manuscripts, pairs)
    except ValueError as e:
        raise InputError(path, 0, str(e)) from e


def read_stemma(path) -> Stemma:
    with open(path, encoding="utf-8") as fh:
        return parse_stemma(fh.read(), path=str(path))


def parse_features(text: str, path: str = "<string>") -> list:
    """Features come as a JSON array of manuscript -> variant objects."""
    try:
        data = json.loads(text)
    except json.JSONDecodeError as e:
        raise InputError(path, e.lineno, e.msg) from e
    if not isinstance(data, list):
        raise InputError(path, 1, "expected a JSON array of objects")
    feats = []
    for idx, entry in enumerate(data):
        if not isinstance(entry, dict) or not all(
            isinstance(k, str) and isinstance(v, str) for k, v in entry.items()
        ):
            raise InputError(path, 1, f"feature {idx} is not a string-to-string object")
        feats.append(feature(entry))
    return feats


def read_features(path) -> list:
    with open(path, encoding="utf-8") as fh:
        return parse_features(fh.read(), path=str(path))
