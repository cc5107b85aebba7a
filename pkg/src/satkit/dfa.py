"""Minimal consistent DFA identification via graph coloring.

Positive and negative example strings unfold into a prefix-tree acceptor
whose states are then merged to shrink the automaton.  Merging is a
coloring problem: states with the same color collapse, accepting and
rejecting states may not share a color, and the acceptor's transitions
must stay deterministic between colors.  `find_min_dfa` solves the
k-coloring decision problem for ascending k and decodes the first model
into an automaton; a greedy clique of pairwise-incompatible states is
pre-colored to break color symmetry.
"""

import random
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .encoding import (
    NoModelError,
    add_at_most,
    add_exactly,
    minimize_cardinality,
    solve_formula,
    tseitin_or,
)
from .errors import InputError
from .formula import CnfFormula


def _word_key(w):
    return (len(w), w)


# ----------------------------------------------------------------------
# samples and acceptors


@dataclass(frozen=True)
class Sample:
    """Labeled example strings; words are tuples of symbol strings."""

    alphabet: tuple
    positives: tuple
    negatives: tuple

    def __post_init__(self):
        syms = set(self.alphabet)
        if len(syms) != len(self.alphabet):
            raise ValueError("duplicate alphabet symbols")
        overlap = set(self.positives) & set(self.negatives)
        if overlap:
            raise ValueError(f"string {min(overlap)!r} is both positive and negative")
        for w in self.positives + self.negatives:
            for sym in w:
                if sym not in syms:
                    raise ValueError(f"symbol {sym!r} outside alphabet")


def sample(positives, negatives=(), alphabet=None) -> Sample:
    """Build a Sample from plain strings (or symbol tuples).

    The alphabet is inferred from the words unless given explicitly.
    """
    pos = tuple(sorted({tuple(w) for w in positives}, key=_word_key))
    neg = tuple(sorted({tuple(w) for w in negatives}, key=_word_key))
    if alphabet is None:
        alphabet = sorted({sym for w in pos + neg for sym in w})
    return Sample(tuple(alphabet), pos, neg)


@dataclass(frozen=True)
class Apta:
    """Prefix-tree acceptor: one state per distinct sample prefix.

    States are numbered in breadth-first order (sorted by prefix length,
    then lexicographically), so the root (the empty prefix) is state 0.
    """

    words: tuple  # prefix spelled by each state
    index: dict  # prefix -> state
    trans: dict  # (state, symbol) -> state
    acc: frozenset
    rej: frozenset
    alphabet: tuple

    @property
    def root(self) -> int:
        return 0


def build_apta(s: Sample) -> Apta:
    prefixes = {()}
    for w in s.positives + s.negatives:
        for i in range(1, len(w) + 1):
            prefixes.add(w[:i])
    order = tuple(sorted(prefixes, key=_word_key))
    index = {w: i for i, w in enumerate(order)}
    trans = {}
    for w in order:
        if w:
            trans[(index[w[:-1]], w[-1])] = index[w]
    acc = frozenset(index[w] for w in s.positives)
    rej = frozenset(index[w] for w in s.negatives)
    return Apta(order, index, trans, acc, rej, s.alphabet)


def _pair(p, q):
    return (p, q) if p < q else (q, p)


def compute_conflicts(a: Apta) -> frozenset:
    """Pairs of acceptor states no consistent automaton may merge.

    Accepting/rejecting pairs conflict outright; a conflict propagates
    backward to the two parents when they reach it on the same symbol.
    """
    parent = {z: (x, l) for (x, l), z in a.trans.items()}
    conflicts = set()
    work = [(p, q) for p in sorted(a.acc) for q in sorted(a.rej)]
    while work:
        p, q = work.pop()
        pair = _pair(p, q)
        if pair in conflicts:
            continue
        conflicts.add(pair)
        pp, qq = parent.get(p), parent.get(q)
        if pp is not None and qq is not None and pp[1] == qq[1]:
            work.append((pp[0], qq[0]))
    return frozenset(conflicts)


def greedy_clique(conflicts, a: Apta) -> tuple:
    """Pairwise-conflicting states, greedily collected in state order.

    States touched by no conflict never join (they cannot extend any
    clique, and seeding with one would block real members).
    """
    touched = {p for pair in conflicts for p in pair}
    clique = []
    for x in range(len(a.words)):
        if x in touched and all(_pair(x, y) in conflicts for y in clique):
            clique.append(x)
    return tuple(clique)


# ----------------------------------------------------------------------
# coloring encoding


@dataclass(frozen=True)
class Dfa:
    """Automaton over colors 0..num_states-1; trans may be partial."""

    alphabet: tuple
    num_states: int
    start: int
    accepting: frozenset
    trans: dict  # (state, symbol) -> state

    def is_total(self) -> bool:
        return all(
            (q, sym) in self.trans
            for q in range(self.num_states)
            for sym in self.alphabet
        )


class ColoringEncoding(NamedTuple):
    formula: CnfFormula
    color_of: dict  # (state, color) -> var
    color_trans: dict  # (color, symbol, color) -> var
    acc_color: dict  # color -> var
    objective: tuple  # transition-use indicators when minimizing transitions


class DfaResult(NamedTuple):
    dfa: Dfa
    clique: tuple
    num_vars: int
    num_clauses: int
    optimal: bool


def encode_coloring(
    a: Apta, k: int, clique=(), redundant=False, objective="states", precolored=None
) -> ColoringEncoding:
    """CNF whose models are the k-colorings of `a` consistent with acc/rej.

    colorOf is one-hot per state; colorTrans stays a partial function
    (at most one target per color and symbol) and is only forced where an
    acceptor transition lands on it.  Clique states take colors 0,1,...
    as units.  `redundant` adds the derived converse — a pinned color
    transition pins the child state's color — which prunes without
    changing the model set.
    """
    if objective not in ("states", "transitions"):
        raise ValueError(f"unknown objective {objective!r}")
    if k < len(clique):
        raise ValueError(f"{k} colors cannot host a {len(clique)}-clique")
    fixed = {x: i for i, x in enumerate(clique)}
    for x, c in sorted(precolored.items()) if precolored else ():
        if not 0 <= c < k:
            raise ValueError(f"state {x} pre-colored {c}, outside 0..{k - 1}")
        if fixed.setdefault(x, c) != c:
            raise ValueError(f"state {x} pre-colored twice")
    f = CnfFormula()
    n = len(a.words)
    co = {(x, i): f.atom("colorOf", x, i) for x in range(n) for i in range(k)}
    for x in range(n):
        add_exactly(f, [co[(x, i)] for i in range(k)], 1)
    for x, c in sorted(fixed.items()):
        f.add_clause((co[(x, c)],))
    ac = {i: f.atom("accColor", i) for i in range(k)}
    for x in sorted(a.acc):
        for i in range(k):
            f.add_clause((-co[(x, i)], ac[i]))
    for x in sorted(a.rej):
        for i in range(k):
            f.add_clause((-co[(x, i)], -ac[i]))
    ct = {}
    for i in range(k):
        for sym in a.alphabet:
            col = [f.atom("colorTrans", i, sym, j) for j in range(k)]
            for j in range(k):
                ct[(i, sym, j)] = col[j]
            add_at_most(f, col, 1)
    # every acceptor transition induces the color transition it lands on
    for (x, sym), z in sorted(a.trans.items()):
        for i in range(k):
            for j in range(k):
                f.add_clause((-co[(x, i)], -co[(z, j)], ct[(i, sym, j)]))
    if redundant:
        for (x, sym), z in sorted(a.trans.items()):
            for i in range(k):
                for j in range(k):
                    f.add_clause((-co[(x, i)], -ct[(i, sym, j)], co[(z, j)]))
    used = ()
    if objective == "transitions":
        used = tuple(
            tseitin_or(
                f,
                [ct[(i, sym, j)] for j in range(k)],
                name=("usedTrans", i, sym),
            )
            for i in range(k)
            for sym in a.alphabet
        )
    return ColoringEncoding(f, co, ct, ac, used)


def _decode(a: Apta, k: int, enc: ColoringEncoding, model) -> Dfa:
    color = {}
    for x in range(len(a.words)):
        for i in range(k):
            if model[enc.color_of[(x, i)]]:
                color[x] = i
                break
    trans = {}
    for (i, sym, j), v in enc.color_trans.items():
        if model[v]:
            trans[(i, sym)] = j
    accepting = frozenset(i for i, v in enc.acc_color.items() if model[v])
    return Dfa(a.alphabet, k, color[a.root], accepting, trans)


def find_min_dfa(
    s: Sample, redundant=False, objective="states", seed: int = 0, precolored=None
) -> DfaResult:
    """Smallest automaton consistent with the sample.

    Tries k = |clique|, |clique|+1, ... until the coloring problem is
    satisfiable; the acceptor itself colors trivially, so the search
    terminates.  With objective="transitions" the winning k is further
    minimized in the number of transitions actually used.  `precolored`
    (prefix word -> color) replaces the computed clique, standing in for
    an external preprocessor's fixed assignments.
    """
    a = build_apta(s)
    if precolored:
        pre = {}
        for w, c in precolored.items():
            w = tuple(w)
            if w not in a.index:
                raise ValueError(f"pre-colored prefix {w!r} is not an acceptor state")
            if c < 0:
                raise ValueError(f"negative color {c} for prefix {w!r}")
            pre[a.index[w]] = c
        clique = ()
        k0 = max(pre.values()) + 1
    else:
        pre = None
        clique = greedy_clique(compute_conflicts(a), a)
        k0 = max(1, len(clique))
    for k in range(k0, len(a.words) + 1):
        enc = encode_coloring(a, k, clique, redundant, objective, pre)
        if objective == "transitions":
            try:
                res = minimize_cardinality(enc.formula, enc.objective, seed=seed)
            except NoModelError:
                continue
            model, optimal = res.model, res.optimal
        else:
            model = solve_formula(enc.formula, seed=seed)
            if model is None:
                continue
            optimal = True
        dfa = _decode(a, k, enc, model)
        for w in s.positives:
            assert run_dfa(dfa, w), f"learned automaton rejects positive {w!r}"
        for w in s.negatives:
            assert not run_dfa(dfa, w), f"learned automaton accepts negative {w!r}"
        return DfaResult(dfa, clique, enc.formula.num_vars, enc.formula.num_clauses, optimal)
    raise RuntimeError("unreachable: the identity coloring is always consistent")


# ----------------------------------------------------------------------
# automaton plumbing


def complete_dfa(d: Dfa) -> Dfa:
    """Total version of `d`; missing transitions land in a rejecting sink.

    The sink has no path to an accepting state, so verdicts on strings
    the partial automaton could already process are unchanged.
    """
    if d.is_total():
        return d
    sink = d.num_states
    trans = dict(d.trans)
    for q in range(d.num_states + 1):
        for sym in d.alphabet:
            trans.setdefault((q, sym), sink)
    return Dfa(d.alphabet, d.num_states + 1, d.start, d.accepting, trans)


def run_dfa(d: Dfa, word) -> bool:
    """Accept/reject verdict for one word; a missing transition rejects."""
    state = d.start
    for sym in tuple(word):
        if sym not in d.alphabet:
            raise ValueError(f"symbol {sym!r} outside alphabet")
        nxt = d.trans.get((state, sym))
        if nxt is None:
            return False
        state = nxt
    return state in d.accepting


def dfa_to_dot(d: Dfa, name: str = "dfa") -> str:
    lines = [
        f"digraph {name} {{",
        "  rankdir=LR;",
        '  __start [shape=point, label=""];',
        f"  __start -> q{d.start};",
    ]
    for q in range(d.num_states):
        shape = "doublecircle" if q in d.accepting else "circle"
        lines.append(f"  q{q} [shape={shape}];")
    for (q, sym), z in sorted(d.trans.items()):
        lines.append(f'  q{q} -> q{z} [label="{sym}"];')
    lines.append("}")
    return "\n".join(lines) + "\n"


# ----------------------------------------------------------------------
# oracle


def brute_force_min_dfa(s: Sample, k_max: int = 4) -> int:
    """Exhaustive minimal state count over all total automata.

    Enumerates every k-state transition table for ascending k; a table is
    consistent when no state is reached by both a positive and a negative
    word (the accepting set is then free to separate them).  Only fit for
    small alphabets and k_max.
    """
    sym_ix = {sym: i for i, sym in enumerate(s.alphabet)}
    pos = [tuple(sym_ix[c] for c in w) for w in s.positives]
    neg = [tuple(sym_ix[c] for c in w) for w in s.negatives]
    m = len(s.alphabet)
    for k in range(1, k_max + 1):
        if k ** (k * m) > 20_000_000:
            raise ValueError(f"{k}-state enumeration exceeds the table budget")
        if _consistent_table_exists(pos, neg, k, m):
            return k
    raise ValueError(f"no consistent automaton within {k_max} states")


def _consistent_table_exists(pos, neg, k: int, m: int) -> bool:
    total = k ** (k * m)
    powers = k ** np.arange(k * m, dtype=np.int64)
    chunk = 1 << 18
    for lo in range(0, total, chunk):
        ids = np.arange(lo, min(lo + chunk, total), dtype=np.int64)
        tables = ((ids[:, None] // powers) % k).reshape(-1, k, max(m, 1))
        rows = np.arange(len(ids))
        posmask = np.zeros((len(ids), k), dtype=bool)
        negmask = np.zeros((len(ids), k), dtype=bool)
        for words, mask in ((pos, posmask), (neg, negmask)):
            for w in words:
                cur = np.zeros(len(ids), dtype=np.int64)
                for sym in w:
                    cur = tables[rows, cur, sym]
                mask[rows, cur] = True
        if bool((~(posmask & negmask).any(axis=1)).any()):
            return True
    return False


def random_sample(num_strings: int, max_len: int, alphabet="ab", seed: int = 0) -> Sample:
    """Random labeled words; duplicate draws are dropped."""
    rng = random.Random(seed)
    alphabet = tuple(alphabet)
    pos, neg = set(), set()
    for _ in range(num_strings):
        w = tuple(rng.choice(alphabet) for _ in range(rng.randint(0, max_len)))
        if w in pos or w in neg:
            continue
        (pos if rng.random() < 0.5 else neg).add(w)
    return Sample(
        alphabet,
        tuple(sorted(pos, key=_word_key)),
        tuple(sorted(neg, key=_word_key)),
    )


# ----------------------------------------------------------------------
# abbadingo i/o


def parse_abbadingo(text: str, path: str = "<string>"):
    """Abbadingo sample text: header "N S", then N lines "label len sym...".

    Label 1 marks a positive string, 0 a negative one.  Lines starting
    with "color" ("color c len sym...") pre-pin the acceptor state
    spelled by the prefix to color c; they do not count toward N.  When
    every symbol is a decimal below S the alphabet is 0..S-1, otherwise
    it is the set of symbols seen.  Returns (Sample, precolored dict).
    """
    header = None
    header_line = 0
    entries = []
    pre = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        tokens = raw.split()
        if not tokens or tokens[0].startswith("#"):
            continue
        if header is None:
            try:
                header = (int(tokens[0]), int(tokens[1]))
            except (ValueError, IndexError):
                raise InputError(path, lineno, "expected header: <string count> <alphabet size>")
            if len(tokens) != 2 or header[0] < 0 or header[1] < 0:
                raise InputError(path, lineno, "expected header: <string count> <alphabet size>")
            header_line = lineno
            continue
        if tokens[0] == "color":
            try:
                c, n = int(tokens[1]), int(tokens[2])
            except (ValueError, IndexError):
                raise InputError(path, lineno, 'expected "color <color> <len> <sym>..."')
            w = tuple(tokens[3:])
            if len(w) != n or c < 0:
                raise InputError(path, lineno, "bad color directive")
            pre[w] = c
            continue
        if tokens[0] not in ("0", "1") or len(tokens) < 2:
            raise InputError(path, lineno, 'expected "<label> <len> <sym>..."')
        try:
            n = int(tokens[1])
        except ValueError:
            raise InputError(path, lineno, f"bad string length {tokens[1]!r}")
        w = tuple(tokens[2:])
        if len(w) != n:
            raise InputError(path, lineno, f"declared length {n}, got {len(w)} symbols")
        entries.append((tokens[0] == "1", w))
    if header is None:
        raise InputError(path, 0, "empty sample file")
    count, size = header
    if len(entries) != count:
        raise InputError(
            path, header_line, f"header declares {count} strings, file has {len(entries)}"
        )
    seen = sorted({sym for _, w in entries for sym in w} | {sym for w in pre for sym in w})
    if all(sym.isdigit() and int(sym) < size for sym in seen):
        alphabet = tuple(str(i) for i in range(size))
    elif len(seen) <= size:
        alphabet = tuple(seen)
    else:
        raise InputError(
            path, header_line, f"{len(seen)} distinct symbols for declared alphabet size {size}"
        )
    try:
        smp = sample(
            [w for lab, w in entries if lab],
            [w for lab, w in entries if not lab],
            alphabet,
        )
    except ValueError as e:
        raise InputError(path, 0, str(e)) from e
    return smp, pre


def read_sample(path):
    with open(path, encoding="utf-8") as fh:
        return parse_abbadingo(fh.read(), path=str(path))


def format_abbadingo(s: Sample, precolored=None) -> str:
    lines = [f"{len(s.positives) + len(s.negatives)} {len(s.alphabet)}"]
    for w, c in sorted((precolored or {}).items(), key=lambda it: _word_key(it[0])):
        lines.append(" ".join(["color", str(c), str(len(w)), *w]))
    for label, words in ((1, s.positives), (0, s.negatives)):
        for w in words:
            lines.append(" ".join([str(label), str(len(w)), *w]))
    return "\n".join(lines) + "\n"
