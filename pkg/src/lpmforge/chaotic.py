"""Entropy-based detection and iterative removal of chaotic activities.

An activity's entropy is the Shannon entropy of its successor distribution
plus that of its predecessor distribution (artificial start/end included).
The direct filter repeatedly removes the highest-entropy activity; the
indirect filter removes the activity whose removal minimizes the remaining
log's total entropy. Laplace smoothing counters the blindness of the raw
estimate to infrequent activities.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from enum import Enum
from typing import Optional

from .eventlog import EventLog, FollowsStats, project, row_entropy


class FilterVariant(Enum):
    DIRECT = "direct"
    INDIRECT = "indirect"
    LEAST_FREQUENT = "least-frequent"
    MOST_FREQUENT = "most-frequent"
    RANDOM = "random"


def activity_entropy(log: EventLog, a: str, alpha: Optional[float] = None) -> float:
    stats = FollowsStats(log, smoothing=alpha)
    return row_entropy(stats.dfr_row(a)) + row_entropy(stats.dpr_row(a))


def log_entropy(log: EventLog, alpha: Optional[float] = None) -> float:
    stats = FollowsStats(log, smoothing=alpha)
    total = 0.0
    for a in stats.activities:
        total += row_entropy(stats.dfr_row(a)) + row_entropy(stats.dpr_row(a))
    return total


@dataclass
class FilterReport:
    variant: FilterVariant
    smoothed: bool
    alpha: Optional[float]  # fixed alpha; None = adaptive 1/|activities|
    removals: list[tuple[str, float]]  # (activity, score at removal time)
    logs: list[EventLog]  # intermediate logs, one per removal

    def removal_order(self) -> list[str]:
        return [a for a, _ in self.removals]

    def to_json(self) -> dict:
        return {
            "variant": self.variant.value,
            "smoothed": self.smoothed,
            "alpha": self.alpha,
            "removals": [{"activity": a, "score": s} for a, s in self.removals],
        }


def filter_chaotic(
    log: EventLog,
    variant: FilterVariant = FilterVariant.DIRECT,
    smoothed: bool = False,
    alpha: Optional[float] = None,
    keep: Optional[int] = None,
    max_removals: Optional[int] = None,
    seed: int = 0,
) -> FilterReport:
    """Iteratively remove one activity at a time, projecting the log after each
    removal, until two activities remain (or the keep/max_removals bound hits).

    Smoothed variants default to the adaptive prior weight 1/|activities of the
    current log| recomputed each iteration. Ties break by activity name.
    """
    floor = max(2, keep if keep is not None else 2)
    removals: list[tuple[str, float]] = []
    logs: list[EventLog] = []
    current = log
    rng = random.Random(seed)

    while len(current.alphabet) > floor:
        if max_removals is not None and len(removals) >= max_removals:
            break
        acts = sorted(current.alphabet)
        victim, score = _pick(current, acts, variant, smoothed, alpha, rng)
        current = project(current, set(acts) - {victim})
        removals.append((victim, score))
        logs.append(current)
    return FilterReport(variant, smoothed, alpha, removals, logs)


def _pick(
    current: EventLog,
    acts: list[str],
    variant: FilterVariant,
    smoothed: bool,
    alpha: Optional[float],
    rng: random.Random,
) -> tuple[str, float]:
    a_eff = None
    if smoothed:
        a_eff = alpha if alpha is not None else 1.0 / len(acts)

    if variant is FilterVariant.DIRECT:
        scores = {a: activity_entropy(current, a, a_eff) for a in acts}
        best = max(scores.values())
        victim = next(a for a in acts if scores[a] == best)
        return victim, scores[victim]
    if variant is FilterVariant.INDIRECT:
        scores = {}
        for a in acts:
            reduced = project(current, set(acts) - {a})
            aa = alpha if alpha is not None else (
                1.0 / max(len(reduced.alphabet), 1) if smoothed else None
            )
            scores[a] = log_entropy(reduced, aa if smoothed else None)
        best = min(scores.values())
        victim = next(a for a in acts if scores[a] == best)
        return victim, scores[victim]
    counts = current.activity_counts()
    if variant is FilterVariant.LEAST_FREQUENT:
        best = min(counts[a] for a in acts)
        victim = next(a for a in acts if counts[a] == best)
        return victim, float(counts[victim])
    if variant is FilterVariant.MOST_FREQUENT:
        best = max(counts[a] for a in acts)
        victim = next(a for a in acts if counts[a] == best)
        return victim, float(counts[victim])
    victim = acts[rng.randrange(len(acts))]
    return victim, float(counts[victim])
