"""Encoding helpers on top of CnfFormula.

Covers Tseitin gates, sequential-counter cardinality constraints, objective
minimization by descending at-most bounds, and level-ranked (founded)
reachability for inductive definitions.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass
from typing import NamedTuple

from .formula import CnfFormula
from .solver import Solver


class NoModelError(Exception):
    """The base formula admits no model at all."""


# ----------------------------------------------------------------------
# Tseitin gates (full iff in both directions)


def tseitin_and(f: CnfFormula, lits, name=None) -> int:
    """Fresh literal equivalent to the conjunction of lits."""
    lits = list(lits)
    if not lits:
        raise ValueError("empty conjunction")
    if len(lits) == 1:
        return lits[0]
    g = f.new_var(name)
    for l in lits:
        f.add_clause((-g, l))
    f.add_clause([g] + [-l for l in lits])
    return g


def tseitin_or(f: CnfFormula, lits, name=None) -> int:
    """Fresh literal equivalent to the disjunction of lits."""
    lits = list(lits)
    if not lits:
        raise ValueError("empty disjunction")
    if len(lits) == 1:
        return lits[0]
    g = f.new_var(name)
    for l in lits:
        f.add_clause((g, -l))
    f.add_clause([-g] + lits)
    return g


def tseitin_implies(f: CnfFormula, a: int, b: int) -> int:
    return tseitin_or(f, (-a, b))


# ----------------------------------------------------------------------
# cardinality (sequential counter)


@dataclass(frozen=True)
class CardinalityConstraint:
    literals: tuple
    bound: int
    sense: str  # 'at_most' | 'at_least' | 'exactly'

    def __post_init__(self):
        if self.bound < 0:
            raise ValueError("negative bound")
        if len(set(self.literals)) != len(self.literals):
            raise ValueError("duplicate literals in cardinality constraint")
        if self.sense not in ("at_most", "at_least", "exactly"):
            raise ValueError(f"unknown sense {self.sense!r}")


def add_at_most(f: CnfFormula, lits, k: int) -> None:
    """Sequential counter: at most k of lits are true."""
    lits = list(lits)
    n = len(lits)
    if k < 0:
        raise ValueError("negative bound")
    if k >= n:
        return
    if k == 0:
        for l in lits:
            f.add_clause((-l,))
        return
    # s[i][j]: at least j+1 true among lits[0..i]
    prev = None
    for i in range(n - 1):
        row = [f.new_var() for _ in range(min(i + 1, k))]
        f.add_clause((-lits[i], row[0]))
        if prev is not None:
            f.add_clause((-prev[0], row[0]))
            for j in range(1, len(row)):
                if j < len(prev):
                    f.add_clause((-prev[j], row[j]))
                f.add_clause((-lits[i], -prev[j - 1], row[j]))
            if len(prev) >= k:
                f.add_clause((-lits[i], -prev[k - 1]))
        prev = row
    if prev is not None and len(prev) >= k:
        f.add_clause((-lits[n - 1], -prev[k - 1]))


def add_at_least(f: CnfFormula, lits, k: int) -> None:
    lits = list(lits)
    n = len(lits)
    if k <= 0:
        return
    if k > n:
        f.add_clause(())  # unsatisfiable
        return
    if k == n:
        for l in lits:
            f.add_clause((l,))
        return
    add_at_most(f, [-l for l in lits], n - k)


def add_exactly(f: CnfFormula, lits, k: int) -> None:
    add_at_most(f, lits, k)
    add_at_least(f, lits, k)


def add_cardinality(f: CnfFormula, c: CardinalityConstraint) -> None:
    if c.sense == "at_most":
        add_at_most(f, c.literals, c.bound)
    elif c.sense == "at_least":
        add_at_least(f, c.literals, c.bound)
    else:
        add_exactly(f, c.literals, c.bound)


# ----------------------------------------------------------------------
# objective minimization


class MinimizeResult(NamedTuple):
    count: int
    model: dict
    optimal: bool


def _load(formula: CnfFormula, seed: int) -> Solver:
    s = Solver(seed)
    s.new_vars(formula.num_vars)
    s.add_clauses(formula.clauses)
    return s


def solve_formula(formula: CnfFormula, seed: int = 0, assumptions=()):
    """One-shot solve; returns a model dict or None."""
    s = _load(formula, seed)
    if s.solve(assumptions):
        return s.model
    return None


def minimize_cardinality(
    formula: CnfFormula, objective, seed: int = 0, time_budget=None
) -> MinimizeResult:
    """Minimize the number of true literals among `objective`.

    Solves once, then repeatedly adds at-most-(k-1) over the objective and
    re-solves until UNSAT.  Raises NoModelError when the base formula is
    unsatisfiable.  With a time budget (seconds), the best incumbent is
    returned with optimal=False once the budget expires.
    """
    from .solver import SolveBudgetExceeded

    objective = list(objective)
    deadline = None if time_budget is None else time.monotonic() + time_budget
    solver = _load(formula, seed)
    try:
        sat = solver.solve(deadline=deadline)
    except SolveBudgetExceeded:
        raise NoModelError("time budget expired before a first model was found")
    if not sat:
        raise NoModelError("formula is unsatisfiable")
    model = solver.model
    k = sum(1 for l in objective if model[abs(l)] == (l > 0))
    if k == 0 or not objective:
        return MinimizeResult(0 if not objective else k, model, True)

    # one-directional counting ladder over the objective, width k
    n = len(objective)
    width = k
    reg = []
    prev = None
    for i in range(n):
        row = [solver.new_var() for _ in range(min(i + 1, width))]
        li = objective[i]
        solver.add_clause((-li, row[0]))
        if prev is not None:
            for j in range(len(row)):
                if j < len(prev):
                    solver.add_clause((-prev[j], row[j]))
                if j >= 1 and j - 1 < len(prev):
                    solver.add_clause((-li, -prev[j - 1], row[j]))
        prev = row
        reg = row
    # reg[j] is forced true when more than j of the objective are true

    # binary search on the bound; -reg[mid] is assumed rather than asserted,
    # so no probe is baked in, while learned clauses carry across probes
    lo, hi = 0, k
    optimal = True
    while lo < hi:
        mid = (lo + hi) // 2
        # drop saved phases so the search does not cling to the previous,
        # now-too-expensive model
        solver.pol = [False] * (solver.nvars + 1)
        try:
            sat = solver.solve(assumptions=(-reg[mid],), deadline=deadline)
        except SolveBudgetExceeded:
            optimal = False
            break
        if sat:
            model = solver.model
            hi = sum(1 for l in objective if model[abs(l)] == (l > 0))
        else:
            lo = mid + 1
    return MinimizeResult(hi, model, optimal)


# ----------------------------------------------------------------------
# founded (least fixpoint) definitions via level ranking


def _less_than(f: CnfFormula, xbits, ybits) -> int:
    """Literal implying x < y for equal-width big-endian bit vectors."""
    cur = None
    for i in range(len(xbits) - 1, -1, -1):
        nxt = f.new_var()
        xb, yb = xbits[i], ybits[i]
        if cur is None:
            # least significant position: exactly x=0, y=1
            f.add_clause((-nxt, -xb))
            f.add_clause((-nxt, yb))
        else:
            f.add_clause((-nxt, -xb, yb))
            f.add_clause((-nxt, xb, yb, cur))
            f.add_clause((-nxt, -xb, -yb, cur))
        cur = nxt
    return cur


def level_width(n: int) -> int:
    """Bit width of the per-atom level counters for n derivable atoms."""
    return max(1, math.ceil(math.log2(n + 1)))


def add_founded_atoms(f: CnfFormula, atoms, base, rec, width, fixed_true=(),
                      order_groups=None):
    """Constrain `atoms` to the least fixpoint of the given rules.

    atoms: key -> literal.  base[key]: literals, each alone a sufficient
    (non-recursive) justification.  rec[key]: (body_key, cond_literal) pairs,
    meaning atom[body_key] & cond justify atom[key].  Keys in fixed_true are
    unconditionally true (no support needed).

    Emits rule closure (body implies head) plus a support clause per atom
    whose recursive justifications must strictly decrease a level counter,
    ruling out circular support.  By default every atom carries its own
    level and the comparator is tied to the individual support, which is
    fully general.

    order_groups (key -> group) switches to one shared level per group:
    each condition literal then globally entails body-group < head-group,
    and supports need no comparator of their own.  This is far smaller but
    prunes models whose true conditions admit no consistent group ranking
    (cyclic selections), so it is only appropriate when such models are
    disposable — e.g. when minimizing, since a minimal founded selection is
    never cyclic.  A condition whose body and head share a group is forced
    false outright.
    """
    fixed = set(fixed_true)
    for y, lits in base.items():
        ay = atoms[y]
        for b in lits:
            f.add_clause((-b, ay))
    for y, insts in rec.items():
        ay = atoms[y]
        for x, cond in insts:
            f.add_clause((-cond, -atoms[x], ay))
    if order_groups is None:
        bits = {y: [f.new_var() for _ in range(width)] for y in atoms}
    else:
        gbits = {}
        bits = {}
        for y in atoms:
            g = order_groups[y]
            if g not in gbits:
                gbits[g] = [f.new_var() for _ in range(width)]
            bits[y] = gbits[g]
        ltmemo = {}   # (group, group) -> lt literal
        bound = set()  # (cond, group, group) already constrained
    for y, ay in atoms.items():
        if y in fixed:
            f.add_clause((ay,))
            continue
        disj = list(base.get(y, ()))
        for x, cond in rec.get(y, ()):
            if order_groups is not None:
                gx, gy = order_groups[x], order_groups[y]
                if gx == gy:
                    # reflexive dependency: the order is unsatisfiable, so
                    # the condition can never hold and the support is dead
                    if (cond, gx, gy) not in bound:
                        bound.add((cond, gx, gy))
                        f.add_clause((-cond,))
                    continue
                if (cond, gx, gy) not in bound:
                    bound.add((cond, gx, gy))
                    if (gx, gy) not in ltmemo:
                        ltmemo[(gx, gy)] = _less_than(f, bits[x], bits[y])
                    f.add_clause((-cond, ltmemo[(gx, gy)]))
                s = f.new_var()
                f.add_clause((-s, cond))
                f.add_clause((-s, atoms[x]))
                disj.append(s)
            else:
                lt = _less_than(f, bits[x], bits[y])
                s = f.new_var()
                f.add_clause((-s, cond))
                f.add_clause((-s, atoms[x]))
                f.add_clause((-s, lt))
                disj.append(s)
        f.add_clause([-ay] + disj)
    return bits


def encode_founded_reachability(f: CnfFormula, nodes, root, edge_lits) -> dict:
    """Reachability from `root` over selectable edges, founded semantics.

    edge_lits maps (u, v) pairs to selection literals.  Returns a map
    node -> literal; in every model the true literals are exactly the nodes
    reachable from root through selected edges.
    """
    nodes = list(nodes)
    if root not in nodes:
        raise ValueError(f"root {root!r} is not a node")
    atoms = {y: f.atom("reachable", y) for y in nodes}
    rec = {y: [] for y in nodes}
    for (u, v), lit in edge_lits.items():
        rec[v].append((u, lit))
    add_founded_atoms(
        f, atoms, {}, rec, level_width(len(nodes)), fixed_true=(root,)
    )
    return atoms
