"""SAT-backed solvers for four graph and identification problems.

The package couples a small CDCL solver with problem encodings for
shortest paths, stemma (copy-history) consistency, minimum common
supergraphs of partially labeled trees, and minimal-DFA identification.
"""

from .solver import Solver, SolveBudgetExceeded, check_model
from .formula import CnfFormula, SymbolTable, to_dimacs, from_dimacs
from .encoding import (
    CardinalityConstraint,
    MinimizeResult,
    NoModelError,
    add_at_least,
    add_at_most,
    add_cardinality,
    add_exactly,
    add_founded_atoms,
    encode_founded_reachability,
    minimize_cardinality,
    solve_formula,
    tseitin_and,
    tseitin_implies,
    tseitin_or,
)
from .shortest_path import (
    DiGraph,
    PathResult,
    bfs_oracle,
    digraph,
    encode_variant,
    random_digraph,
    solve_shortest_path,
)
from .stemma import (
    Feature,
    SourceMinimum,
    Stemma,
    Witness,
    check_coloring,
    check_consistency,
    feature,
    minimize_sources,
    reduce_sat_to_color_connected,
    stemma,
)
from .supergraph import (
    McsResult,
    PartiallyLabeledGraph,
    Supergraph,
    exact_mcs,
    greedy_mcs,
    plg,
    verify_supergraph,
)
from .dfa import (
    Apta,
    Dfa,
    DfaResult,
    Sample,
    build_apta,
    complete_dfa,
    compute_conflicts,
    find_min_dfa,
    greedy_clique,
    run_dfa,
    sample,
)

__version__ = "0.1.0"
