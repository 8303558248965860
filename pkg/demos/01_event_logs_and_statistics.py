"""Event logs: ingestion, projection, and directly-follows statistics.

Walks through loading the bundled CSV, the labeled-log view, projecting on an
activity subset, and the successor/predecessor ratio rows with their
artificial start/end symbols.
"""

from pathlib import Path

from lpmforge import CsvMapping, compute_follows_stats, parse_csv, project
from lpmforge.eventlog import END, START

DATA = Path(__file__).parent.parent / "data" / "household.csv"

log = parse_csv(DATA.read_bytes(), CsvMapping("case", "activity", "timestamp"))
print(f"{len(log)} traces, {log.total_events()} events, alphabet {sorted(log.alphabet)}")

# the labeled view is a multiset of label sequences
variants = log.variant_counts()
top = variants.most_common(3)
for labels, count in top:
    print(f"  {count:2d}x  {' -> '.join(labels)}")

# projection keeps empty traces and preserves timestamps/attributes
morning = project(log, {"wake", "kettle", "toast", "eat"})
print("\nprojected on the wake-up block:", morning.traces[0].labels)

# dfr rows sum to one including the artificial end symbol
stats = compute_follows_stats(log)
row = stats.dfr_row("wake")
print("\nsuccessors of 'wake':")
for successor, p in sorted(row.items(), key=lambda kv: -kv[1]):
    if p > 0:
        name = "<end>" if successor == END else successor
        print(f"  {name:8s} {p:.2f}")
print("row sum:", sum(row.values()))

# smoothing pulls rows toward uniform; useful for rare activities
smoothed = compute_follows_stats(log, smoothing=1.0)
print("\nsmoothed dfr(wake, kettle):", round(smoothed.dfr("wake", "kettle"), 3))
print("unsmoothed dfr(wake, kettle):", round(stats.dfr("wake", "kettle"), 3))
print("dpr(wake, <start>):", round(stats.dpr("wake", START), 3))
