"""Merge two partially labeled trees into a smallest common supergraph.

Both trees have seven vertices but only four carry names; the solver
chooses names for the rest so that the union of the two edge images is as
small as possible.  The optimum here needs just one arc more than either
tree alone.  The greedy variant merges trees into an accumulator one at a
time — fast, but only a heuristic.
"""

import pathlib

from satkit.supergraph import exact_mcs, greedy_mcs, read_instance, verify_supergraph

DATA = pathlib.Path(__file__).parent / "data"

graphs, names = read_instance(DATA / "twotrees.json")
print(f"{len(graphs)} trees over names {', '.join(names)}; "
      f"edge counts {[len(g.edges) for g in graphs]}")

exact = exact_mcs(graphs, names)
print(f"\nexact minimum: {len(exact.supergraph.arcs)} arcs")
for a, b in sorted(exact.supergraph.arcs):
    print(f"  {a} -- {b}")
assert verify_supergraph(graphs, exact.family, exact.supergraph)

greedy = greedy_mcs(graphs, names)
print(f"\ngreedy merge: {len(greedy.supergraph.arcs)} arcs")
for t, lab in enumerate(greedy.family):
    free = {v: nm for v, nm in sorted(lab.items()) if v not in graphs[t].labels}
    print(f"  tree {t} got names {free}")
