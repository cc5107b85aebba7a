"""CNF formula container, atom-to-variable symbol table, DIMACS I/O."""

from __future__ import annotations

from .errors import InputError


class SymbolTable:
    """Bidirectional map between problem atoms and SAT variables.

    Atom names are (predicate, *args) tuples.  Both directions are injective.
    """

    def __init__(self):
        self._var_of = {}
        self._name_of = {}

    def bind(self, name, var):
        if name in self._var_of or var in self._name_of:
            raise ValueError(f"symbol {name!r} / variable {var} already bound")
        self._var_of[name] = var
        self._name_of[var] = name

    def var_of(self, name):
        return self._var_of[name]

    def name_of(self, var):
        return self._name_of[var]

    def __contains__(self, name):
        return name in self._var_of

    def __len__(self):
        return len(self._var_of)

    def items(self):
        return self._var_of.items()

    @staticmethod
    def format_name(name):
        pred, *args = name
        if not args:
            return str(pred)
        return "%s(%s)" % (pred, ",".join(str(a) for a in args))

    def dump(self) -> str:
        """One `name ↦ variable` pair per line, ordered by variable."""
        lines = [
            "%s ↦ %d" % (self.format_name(n), v)
            for v, n in sorted(self._name_of.items())
        ]
        return "\n".join(lines) + ("\n" if lines else "")


class CnfFormula:
    """A growable CNF: variable counter, clause list and a symbol table."""

    def __init__(self):
        self.num_vars = 0
        self.clauses = []
        self.symbols = SymbolTable()

    @property
    def num_clauses(self):
        return len(self.clauses)

    def new_var(self, name=None) -> int:
        self.num_vars += 1
        if name is not None:
            self.symbols.bind(name, self.num_vars)
        return self.num_vars

    def atom(self, pred, *args) -> int:
        """Variable for the named atom, allocating it on first use."""
        name = (pred, *args)
        if name in self.symbols:
            return self.symbols.var_of(name)
        return self.new_var(name)

    def add_clause(self, lits) -> bool:
        """Append a clause; returns False if it was dropped as a tautology."""
        out = []
        seen = set()
        for l in lits:
            if l == 0 or abs(l) > self.num_vars:
                raise ValueError("literal %r uses an unallocated variable" % (l,))
            if -l in seen:
                return False
            if l not in seen:
                seen.add(l)
                out.append(l)
        self.clauses.append(tuple(out))
        return True


def to_dimacs(formula: CnfFormula) -> str:
    lines = ["p cnf %d %d" % (formula.num_vars, formula.num_clauses)]
    for cl in formula.clauses:
        lines.append(" ".join(str(l) for l in cl) + " 0")
    return "\n".join(lines) + "\n"


def from_dimacs(text: str, path: str = "<dimacs>") -> CnfFormula:
    f = CnfFormula()
    declared = None
    cur = []
    for ln, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("c") or line.startswith("%"):
            continue
        if line.startswith("p"):
            parts = line.split()
            if len(parts) != 4 or parts[1] != "cnf":
                raise InputError(path, ln, "malformed problem line")
            try:
                nv, declared = int(parts[2]), int(parts[3])
            except ValueError:
                raise InputError(path, ln, "malformed problem line") from None
            f.num_vars = nv
            continue
        if declared is None:
            raise InputError(path, ln, "clause before problem line")
        for tok in line.split():
            try:
                l = int(tok)
            except ValueError:
                raise InputError(path, ln, f"bad literal {tok!r}") from None
            if l == 0:
                f.add_clause(cur)
                cur = []
            else:
                if abs(l) > f.num_vars:
                    raise InputError(path, ln, f"literal {l} out of range")
                cur.append(l)
    if cur:
        raise InputError(path, ln, "unterminated clause")
    return f


def write_dimacs(formula: CnfFormula, path) -> None:
    with open(path, "w") as fh:
        fh.write(to_dimacs(formula))


def write_symbols(formula: CnfFormula, path) -> None:
    with open(path, "w") as fh:
        fh.write(formula.symbols.dump())


def read_dimacs(path) -> CnfFormula:
    with open(path) as fh:
        return from_dimacs(fh.read(), str(path))
