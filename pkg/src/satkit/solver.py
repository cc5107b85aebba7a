"""Conflict-driven clause learning SAT solver.

Literals are nonzero ints (DIMACS convention: +v / -v), variables are dense
positive ints handed out by new_var().  The solver is incremental: clauses can
be added between solve() calls and solving under assumptions is supported.
Runs are deterministic for a fixed seed and clause insertion order.
"""

from __future__ import annotations

import heapq
import time


class SolveBudgetExceeded(Exception):
    """Raised when a deadline passed to solve() expires mid-search."""


class _Clause(list):
    __slots__ = ("learnt", "act")

    def __init__(self, lits, learnt=False):
        super().__init__(lits)
        self.learnt = learnt
        self.act = 0.0


def _luby(i):
    """i-th term (0-based) of the Luby restart sequence."""
    size, seq = 1, 0
    while size < i + 1:
        size = 2 * size + 1
        seq += 1
    while size - 1 != i:
        size = (size - 1) >> 1
        seq -= 1
        i = i % size
    return 1 << seq


def check_model(clauses, model):
    """True when every clause has a literal satisfied by the model (var -> bool)."""
    return all(any(model[abs(l)] == (l > 0) for l in cl) for cl in clauses)


class Solver:
    RESTART_BASE = 100
    VAR_DECAY = 0.95
    CLA_DECAY = 0.999

    def __init__(self, seed: int = 0):
        import random

        self._rng = random.Random(seed)
        self.nvars = 0
        self.ok = True
        self.clauses = []
        self.learnts = []
        # indexed by variable (slot 0 unused)
        self.values = [0]
        self.levels = [0]
        self.reasons = [None]
        self.acts = [0.0]
        self.pol = [False]
        self.seen = bytearray(1)
        # indexed by literal code (2v for +v, 2v+1 for -v)
        self.watches = [[], []]
        self.trail = []
        self.trail_lim = []
        self.qhead = 0
        self.heap = []
        self.var_inc = 1.0
        self.cla_inc = 1.0
        self.max_learnts = 4000
        self.total_conflicts = 0
        self.model = None

    # ------------------------------------------------------------------
    # variables and clauses

    def new_var(self) -> int:
        self.nvars += 1
        v = self.nvars
        self.values.append(0)
        self.levels.append(0)
        self.reasons.append(None)
        # tiny seed-dependent jitter so distinct seeds explore differently
        self.acts.append(self._rng.random() * 1e-9)
        self.pol.append(False)
        self.seen.append(0)
        self.watches.append([])
        self.watches.append([])
        heapq.heappush(self.heap, (-self.acts[v], v))
        return v

    def new_vars(self, n: int) -> None:
        for _ in range(n):
            self.new_var()

    def _val(self, l):
        return self.values[l] if l > 0 else -self.values[-l]

    def add_clause(self, lits) -> None:
        """Add a clause; duplicate literals are merged, tautologies dropped.

        Raises ValueError if a literal names an unallocated variable.  An
        empty clause makes the solver permanently UNSAT.
        """
        for l in lits:
            if not isinstance(l, int) or l == 0 or abs(l) > self.nvars:
                raise ValueError("literal %r uses an unallocated variable" % (l,))
        if not self.ok:
            return
        self._cancel_until(0)
        out = []
        seen = set()
        for l in lits:
            if -l in seen:
                return  # tautology
            if l in seen:
                continue
            v = self._val(l)
            if v == 1 and self.levels[abs(l)] == 0:
                return  # already satisfied at root
            if v == -1 and self.levels[abs(l)] == 0:
                continue  # false at root, drop literal
            seen.add(l)
            out.append(l)
        if not out:
            self.ok = False
            return
        if len(out) == 1:
            l = out[0]
            if self._val(l) == -1:
                self.ok = False
            elif self._val(l) == 0:
                self._enqueue(l, None)
                if self._propagate() is not None:
                    self.ok = False
            return
        cl = _Clause(out)
        self.clauses.append(cl)
        self._watch(cl)

    def add_clauses(self, clauses) -> None:
        """Bulk add_clause for pre-canonicalized clauses.

        Callers promise no duplicate literals and no tautologies within a
        clause (anything a CnfFormula hands out qualifies); root-level
        simplification still applies.  Much faster than one add_clause
        per clause on large formulas.
        """
        if not self.ok:
            return
        self._cancel_until(0)
        nvars, values = self.nvars, self.values
        for lits in clauses:
            out = []
            sat = False
            for l in lits:
                v = -l if l < 0 else l
                if v == 0 or v > nvars:
                    raise ValueError(
                        "literal %r uses an unallocated variable" % (l,)
                    )
                val = values[v]
                if val == 0:
                    out.append(l)
                elif (val == 1) == (l > 0):
                    sat = True   # already true at root
                    break
            if sat:
                continue
            if not out:
                self.ok = False
                return
            if len(out) == 1:
                self._enqueue(out[0], None)
                if self._propagate() is not None:
                    self.ok = False
                    return
            else:
                cl = _Clause(out)
                self.clauses.append(cl)
                self._watch(cl)

    def _watch(self, cl):
        a, b = cl[0], cl[1]
        self.watches[(a << 1) if a > 0 else ((-a << 1) | 1)].append((cl, b))
        self.watches[(b << 1) if b > 0 else ((-b << 1) | 1)].append((cl, a))

    # ------------------------------------------------------------------
    # trail

    def _enqueue(self, l, reason):
        v = abs(l)
        self.values[v] = 1 if l > 0 else -1
        self.levels[v] = len(self.trail_lim)
        self.reasons[v] = reason
        self.trail.append(l)

    def _cancel_until(self, level):
        if len(self.trail_lim) <= level:
            return
        bound = self.trail_lim[level]
        values, pol, acts, heap = self.values, self.pol, self.acts, self.heap
        for i in range(len(self.trail) - 1, bound - 1, -1):
            l = self.trail[i]
            v = abs(l)
            pol[v] = l > 0
            values[v] = 0
            self.reasons[v] = None
            heapq.heappush(heap, (-acts[v], v))
        del self.trail[bound:]
        del self.trail_lim[level:]
        self.qhead = min(self.qhead, len(self.trail))

    # ------------------------------------------------------------------
    # propagation

    def _propagate(self):
        values = self.values
        watches = self.watches
        trail = self.trail
        while self.qhead < len(trail):
            p = trail[self.qhead]
            self.qhead += 1
            # clauses watching -p must be checked
            code = ((-p) << 1) if p < 0 else ((p << 1) | 1)
            wl = watches[code]
            i = j = 0
            n = len(wl)
            fl = -p
            while i < n:
                cl, blocker = wl[i]
                i += 1
                if (values[blocker] if blocker > 0 else -values[-blocker]) == 1:
                    wl[j] = (cl, blocker)
                    j += 1
                    continue
                if cl[0] == fl:
                    cl[0] = cl[1]
                    cl[1] = fl
                first = cl[0]
                if first != blocker and (
                    values[first] if first > 0 else -values[-first]
                ) == 1:
                    wl[j] = (cl, first)
                    j += 1
                    continue
                moved = False
                for k in range(2, len(cl)):
                    lk = cl[k]
                    if (values[lk] if lk > 0 else -values[-lk]) != -1:
                        cl[1] = lk
                        cl[k] = fl
                        watches[(lk << 1) if lk > 0 else ((-lk << 1) | 1)].append(
                            (cl, first)
                        )
                        moved = True
                        break
                if moved:
                    continue
                # unit or conflict
                wl[j] = (cl, first)
                j += 1
                if (values[first] if first > 0 else -values[-first]) == -1:
                    while i < n:
                        wl[j] = wl[i]
                        j += 1
                        i += 1
                    del wl[j:]
                    return cl
                self._enqueue(first, cl)
            del wl[j:]
        return None

    # ------------------------------------------------------------------
    # conflict analysis (first UIP)

    def _bump_var(self, v):
        self.acts[v] += self.var_inc
        if self.acts[v] > 1e100:
            for u in range(1, self.nvars + 1):
                self.acts[u] *= 1e-100
            self.var_inc *= 1e-100
            self.heap = [(-self.acts[u], u) for u in range(1, self.nvars + 1)
                         if self.values[u] == 0]
            heapq.heapify(self.heap)
            return
        if self.values[v] == 0:
            heapq.heappush(self.heap, (-self.acts[v], v))

    def _analyze(self, confl):
        learnt = [0]
        seen = self.seen
        trail, levels, reasons = self.trail, self.levels, self.reasons
        cur = len(self.trail_lim)
        counter = 0
        p = 0
        idx = len(trail) - 1
        to_clear = []
        c = confl
        while True:
            if c.learnt:
                c.act += self.cla_inc
            for q in (c if p == 0 else c[1:]):
                v = abs(q)
                if not seen[v] and levels[v] > 0:
                    seen[v] = 1
                    to_clear.append(v)
                    self._bump_var(v)
                    if levels[v] >= cur:
                        counter += 1
                    else:
                        learnt.append(q)
            while not seen[abs(trail[idx])]:
                idx -= 1
            p = trail[idx]
            v = abs(p)
            c = reasons[v]
            seen[v] = 0
            idx -= 1
            counter -= 1
            if counter == 0:
                break
        learnt[0] = -p
        if len(learnt) == 1:
            bt = 0
        else:
            mi = 1
            for i in range(2, len(learnt)):
                if levels[abs(learnt[i])] > levels[abs(learnt[mi])]:
                    mi = i
            learnt[1], learnt[mi] = learnt[mi], learnt[1]
            bt = levels[abs(learnt[1])]
        for v in to_clear:
            seen[v] = 0
        return bt, learnt

    # ------------------------------------------------------------------
    # learnt clause database

    def _reduce_db(self):
        lim = len(self.learnts) // 2
        keep, drop = [], 0
        # lowest activity first; stable order keeps this deterministic
        order = sorted(range(len(self.learnts)), key=lambda i: (self.learnts[i].act, i))
        locked = set()
        for v in range(1, self.nvars + 1):
            r = self.reasons[v]
            if r is not None:
                locked.add(id(r))
        doomed = set()
        for i in order:
            cl = self.learnts[i]
            if drop >= lim:
                break
            if len(cl) > 2 and id(cl) not in locked:
                doomed.add(id(cl))
                drop += 1
        if not doomed:
            self.max_learnts = int(self.max_learnts * 1.3)
            return
        self.learnts = [cl for cl in self.learnts if id(cl) not in doomed]
        self.watches = [[] for _ in range(2 * self.nvars + 2)]
        for cl in self.clauses:
            self._watch(cl)
        for cl in self.learnts:
            self._watch(cl)
        self.max_learnts = int(self.max_learnts * 1.3)

    # ------------------------------------------------------------------
    # search

    def _pick_branch(self):
        heap, acts, values = self.heap, self.acts, self.values
        while heap:
            negact, v = heapq.heappop(heap)
            if values[v] == 0 and acts[v] == -negact:
                return v if self.pol[v] else -v
        return None

    def _search(self, budget, deadline):
        conflicts = 0
        while True:
            confl = self._propagate()
            if confl is not None:
                conflicts += 1
                self.total_conflicts += 1
                if not self.trail_lim:
                    self.ok = False
                    return False
                bt, learnt = self._analyze(confl)
                self._cancel_until(bt)
                if len(learnt) == 1:
                    self._enqueue(learnt[0], None)
                else:
                    cl = _Clause(learnt, learnt=True)
                    cl.act = self.cla_inc
                    self.learnts.append(cl)
                    self._watch(cl)
                    self._enqueue(cl[0], cl)
                self.var_inc /= self.VAR_DECAY
                self.cla_inc /= self.CLA_DECAY
                if self.cla_inc > 1e20:
                    for c in self.learnts:
                        c.act *= 1e-20
                    self.cla_inc *= 1e-20
                if deadline is not None and self.total_conflicts % 512 == 0:
                    if time.monotonic() > deadline:
                        raise SolveBudgetExceeded()
                if len(self.learnts) >= self.max_learnts:
                    self._reduce_db()
            else:
                if conflicts >= budget:
                    self._cancel_until(0)
                    return None
                dl = len(self.trail_lim)
                if dl < len(self._assumptions):
                    a = self._assumptions[dl]
                    v = self._val(a)
                    if v == -1:
                        return False
                    self.trail_lim.append(len(self.trail))
                    if v == 0:
                        self._enqueue(a, None)
                    continue
                lit = self._pick_branch()
                if lit is None:
                    self.model = {
                        v: self.values[v] == 1 for v in range(1, self.nvars + 1)
                    }
                    return True
                self.trail_lim.append(len(self.trail))
                self._enqueue(lit, None)

    def solve(self, assumptions=(), deadline=None) -> bool:
        """Solve under the given assumption literals.

        Returns True (model in .model, a total var -> bool map) or False.
        The solver stays usable after either answer.  If a deadline
        (time.monotonic() value) is given, SolveBudgetExceeded may be raised.
        """
        for a in assumptions:
            if not isinstance(a, int) or a == 0 or abs(a) > self.nvars:
                raise ValueError("assumption %r uses an unallocated variable" % (a,))
        self.model = None
        if not self.ok:
            return False
        self._cancel_until(0)
        self._assumptions = list(assumptions)
        self.max_learnts = max(self.max_learnts, 2000 + len(self.clauses) // 3)
        rnd = 0
        try:
            while True:
                if deadline is not None and time.monotonic() > deadline:
                    raise SolveBudgetExceeded()
                res = self._search(_luby(rnd) * self.RESTART_BASE, deadline)
                if res is not None:
                    self._cancel_until(0)
                    return res
                rnd += 1
        finally:
            if self.model is None:
                self._cancel_until(0)
