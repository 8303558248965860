"""From many overlapping patterns to a small non-redundant set.

All patterns merge into one global model sharing an initial and final place
plus a backloop; aligning the log on it makes the patterns compete for events,
each event explained at most once. Coverage counts explained events,
non-redundancy is the escaping-edges precision of that model against the
aligned behavior, and the F-score balances the two.
"""

from pathlib import Path

from lpmforge import (
    CsvMapping,
    MinerConfig,
    diversity_filter,
    mine,
    parse_csv,
    score_set,
    select_alignment,
    select_greedy,
    select_greedy_fscore,
)

DATA = Path(__file__).parent.parent / "data" / "household.csv"
log = parse_csv(DATA.read_bytes(), CsvMapping("case", "activity", "timestamp"))

pool = [p.tree for p in mine(log, MinerConfig(min_support=10, min_determinism=0.6, max_iterations=2, top_k=30)).patterns]
print(f"candidate pool: {len(pool)} patterns")

for name, selector in (
    ("alignment", select_alignment),
    ("greedy", select_greedy),
    ("greedy-fscore", select_greedy_fscore),
):
    chosen = selector(log, pool)
    score = score_set(log, chosen)
    print(f"\n{name}: {len(chosen)} patterns, coverage {score.coverage:.3f}, "
          f"non-redundancy {score.non_redundancy:.3f}, F-score {score.fscore:.3f}")
    for p in chosen[:4]:
        print("   ", p)

diverse = diversity_filter(pool, 0.5)
print(f"\ndiversity filter (Jaccard >= 0.5): {len(pool)} -> {len(diverse)} patterns")
