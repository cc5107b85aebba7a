"""Check variant readings against a manuscript tradition.

A feature assigns some manuscripts a reading; the copy history is
consistent with it when the readings can be completed so that every
variant originates in a single manuscript (all other holders inherit it
from a parent).  When that fails, minimize_sources reports how many
independent origins the feature actually forces.
"""

import pathlib

from satkit.stemma import check_consistency, minimize_sources, read_features, read_stemma

DATA = pathlib.Path(__file__).parent / "data"

tradition = read_stemma(DATA / "tradition.dot")
print(f"tradition of {len(tradition.manuscripts)} manuscripts, root {tradition.root}")

for i, feat in enumerate(read_features(DATA / "readings.json")):
    given = ", ".join(f"{m}={v}" for m, v in sorted(feat.readings.items()))
    wit = check_consistency(tradition, feat)
    print(f"\nfeature {i}: {given}")
    if wit is None:
        print("  inconsistent with the tradition")
    else:
        origins = ", ".join(f"{v} from {m}" for v, m in sorted(wit.sources.items()))
        print(f"  consistent ({origins})")
    best = minimize_sources(tradition, feat)
    print(f"  fewest origins over all completions: {best.count} ({', '.join(sorted(best.sources))})")
