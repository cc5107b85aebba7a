"""Learn a smallest automaton consistent with labeled strings.

The sample's prefixes form a tree acceptor; coloring its states with k
colors — accepting and rejecting states apart, transitions kept
deterministic — is exactly a k-state automaton consistent with the
sample.  The search tries ascending k, here settling on three states.
"""

import pathlib

from satkit.dfa import brute_force_min_dfa, complete_dfa, dfa_to_dot, find_min_dfa, read_sample, run_dfa

DATA = pathlib.Path(__file__).parent / "data"

smp, _ = read_sample(DATA / "strings.abba")
print("positives:", ", ".join("".join(w) or "<empty>" for w in smp.positives))
print("negatives:", ", ".join("".join(w) or "<empty>" for w in smp.negatives))

res = find_min_dfa(smp, objective="transitions")
d = res.dfa
print(f"\nlearned {d.num_states} states / {len(d.trans)} transitions "
      f"(exhaustive search agrees: {brute_force_min_dfa(smp)} states)")

total = complete_dfa(d)
for w in ("", "a", "aa", "ab", "bb", "bab", "abaa"):
    verdict = "accept" if run_dfa(total, w) else "reject"
    print(f"  {w or '<empty>':>6} -> {verdict}")

print("\n" + dfa_to_dot(d), end="")
