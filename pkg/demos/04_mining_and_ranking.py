"""Mining ranked patterns from the household log.

Candidates grow one activity leaf per round; each is scored on support,
confidence, language fit, determinism, and coverage; the weighted aggregate
ranks the survivors.
"""

from pathlib import Path

from lpmforge import CsvMapping, MinerConfig, RankingWeights, mine, parse_csv

DATA = Path(__file__).parent.parent / "data" / "household.csv"
log = parse_csv(DATA.read_bytes(), CsvMapping("case", "activity", "timestamp"))

config = MinerConfig(
    min_support=10,
    min_determinism=0.6,
    max_iterations=2,
    top_k=12,
    weights=RankingWeights(),
)
result = mine(log, config)

print(f"evaluated {result.evaluations} candidates over {len(result.rounds)} rounds\n")
header = f"{'pattern':42s} {'sup':>4s} {'conf':>5s} {'lfit':>5s} {'det':>5s} {'cov':>5s} {'score':>6s}"
print(header)
print("-" * len(header))
for p in result.patterns:
    q = p.quality
    lfit = "n/a" if q.language_fit is None else f"{q.language_fit:.2f}"
    print(
        f"{p.key:42s} {q.support:4d} {q.confidence:5.2f} {lfit:>5s} "
        f"{q.determinism:5.2f} {q.coverage:5.2f} {q.aggregate:6.3f}"
    )

best = result.patterns[0]
print(f"\ntop pattern instances ({best.key}):")
for inst, _ in best.instances.instances[:5]:
    print("  ", inst.trace_id, inst.landmarks)
