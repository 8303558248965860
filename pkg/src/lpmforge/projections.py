"""Heuristic discovery of activity projection sets and projected mining.

Three heuristics: Markov clustering over an activity-connectedness matrix
built from the directly-precedes/-follows ratios, bottom-up growth bounded by
log entropy, and bottom-up growth driven by maximal relative information gain.
Every returned family is containment-free: no set is contained in another.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .chaotic import log_entropy
from .eventlog import EventLog, FollowsStats, project, row_entropy
from .mining import MinerConfig, MiningResult, mine
from .quality import evaluate, sort_ranking


@dataclass(frozen=True)
class ProjectionSet:
    sets: tuple[frozenset[str], ...]

    def __post_init__(self):
        for i, a in enumerate(self.sets):
            for j, b in enumerate(self.sets):
                if i != j and a <= b:
                    raise ValueError("projection sets must be containment-free")

    def __iter__(self):
        return iter(self.sets)

    def __len__(self):
        return len(self.sets)

    def to_json(self) -> list[list[str]]:
        return [sorted(s) for s in self.sets]


def _drop_contained(sets: list[frozenset[str]]) -> ProjectionSet:
    uniq = sorted(set(sets), key=lambda s: (-len(s), sorted(s)))
    kept: list[frozenset[str]] = []
    for s in uniq:
        if not any(s <= k for k in kept):
            kept.append(s)
    return ProjectionSet(tuple(sorted(kept, key=lambda s: sorted(s))))


# ---------------------------------------------------------------------------
# Markov clustering


def markov_projections(
    log: EventLog,
    inflation: float = 1.5,
    max_rounds: int = 100,
    tol: float = 1e-6,
    prune: float = 1e-8,
) -> ProjectionSet:
    """Markov clustering of the activity connectedness graph.

    Connectedness of a with b is the L2 norm of dpr(a,b) and dfr(b,a). The
    matrix is row-normalized, self-loops are added with the row maximum for
    stability, and expansion (matrix squaring) alternates with inflation
    (entrywise power, renormalize) until convergence. Overlapping clusters
    are read off the attractor rows and kept.
    """
    if inflation <= 1:
        raise ValueError("inflation must be > 1")
    acts = sorted(log.alphabet)
    if not acts:
        return ProjectionSet(())
    if len(acts) == 1:
        return ProjectionSet((frozenset(acts),))
    stats = FollowsStats(log)
    n = len(acts)
    m = np.zeros((n, n))
    for i, a in enumerate(acts):
        dpr_row = stats.dpr_row(a)
        for j, b in enumerate(acts):
            m[i, j] = float(np.hypot(dpr_row.get(b, 0.0), stats.dfr(b, a)))
    np.fill_diagonal(m, m.max(axis=1, initial=0.0))
    m = _row_normalize(m)

    for _ in range(max_rounds):
        expanded = m @ m
        inflated = np.power(expanded, inflation)
        inflated[inflated < prune] = 0.0
        nxt = _row_normalize(inflated)
        if np.abs(nxt - m).max() < tol:
            m = nxt
            break
        m = nxt

    clusters: list[frozenset[str]] = []
    for i in range(n):
        if m[i, i] > 0:  # attractor row
            members = frozenset(acts[j] for j in range(n) if m[i, j] > 0)
            clusters.append(members)
    covered = set().union(*clusters) if clusters else set()
    for j, a in enumerate(acts):  # singletons for anything no attractor claims
        if a not in covered:
            clusters.append(frozenset((a,)))
    return _drop_contained(clusters)


def _row_normalize(m: np.ndarray) -> np.ndarray:
    sums = m.sum(axis=1, keepdims=True)
    sums[sums == 0.0] = 1.0
    return m / sums


# ---------------------------------------------------------------------------
# entropy-bounded growth


def entropy_projections(
    log: EventLog, max_entropy: float, frontier_cap: int = 10_000
) -> ProjectionSet:
    """Grow singletons by union with singletons while the projected log's total
    entropy stays within the threshold; keep maximal sets only."""
    if max_entropy < 0:
        raise ValueError("entropy threshold must be >= 0")
    acts = sorted(log.alphabet)
    singletons = [frozenset((a,)) for a in acts]
    levels: list[set[frozenset[str]]] = [set(singletons)]
    current = set(singletons)
    while current:
        nxt: set[frozenset[str]] = set()
        for s in current:
            for one in singletons:
                grown = s | one
                if grown == s or grown in nxt:
                    continue
                if log_entropy(project(log, grown)) <= max_entropy:
                    nxt.add(grown)
                    if len(nxt) > frontier_cap:
                        break
            if len(nxt) > frontier_cap:
                break
        if not nxt or any(len(s) == len(acts) for s in nxt):
            levels.append(nxt)
            break
        levels.append(nxt)
        current = nxt
    return _drop_contained([s for level in levels for s in level])


# ---------------------------------------------------------------------------
# maximal relative information gain


def _mrig(grown: EventLog, base: EventLog, base_acts: frozenset[str]) -> float:
    """Largest relative entropy drop of any dfr/dpr row of the base activities
    when growing the projection; rows with zero entropy before contribute 0."""
    sb = FollowsStats(base)
    sg = FollowsStats(grown)
    best = 0.0
    for a in sorted(base_acts):
        for row_of in ("dfr_row", "dpr_row"):
            before = row_entropy(getattr(sb, row_of)(a))
            after = row_entropy(getattr(sg, row_of)(a))
            if before <= 0.0:
                continue
            best = max(best, (before - after) / before)
    return best


def mrig_projections(
    log: EventLog, min_gain: float = 0.1, frontier_cap: int = 10_000
) -> ProjectionSet:
    """Grow a set by an activity when the relative information gain over the
    ungrown set strictly exceeds the threshold; keep maximal sets only."""
    if not 0.0 <= min_gain <= 1.0:
        raise ValueError("min gain must be in [0, 1]")
    acts = sorted(log.alphabet)
    singletons = [frozenset((a,)) for a in acts]
    levels: list[set[frozenset[str]]] = [set(singletons)]
    current = set(singletons)
    while current:
        nxt: set[frozenset[str]] = set()
        for s in current:
            base = project(log, s)
            for one in singletons:
                grown_set = s | one
                if grown_set == s or grown_set in nxt:
                    continue
                grown = project(log, grown_set)
                if _mrig(grown, base, s) > min_gain:
                    nxt.add(grown_set)
                    if len(nxt) > frontier_cap:
                        break
            if len(nxt) > frontier_cap:
                break
        levels.append(nxt)
        if not nxt or any(len(s) == len(acts) for s in nxt):
            break
        current = nxt
    return _drop_contained([s for level in levels for s in level])


# ---------------------------------------------------------------------------
# projected mining


def mine_projected(log: EventLog, sets: ProjectionSet, config: MinerConfig) -> MiningResult:
    """Mine each projected log, re-evaluate every found pattern against the full
    log (so coverage and confidence denominators are comparable), deduplicate
    structurally, and return the merged top-k ranking."""
    pool: dict[str, object] = {}
    evaluations = 0
    rounds = []
    for q in sets:
        sub = mine(project(log, q), config)
        evaluations += sub.evaluations
        rounds.extend(sub.rounds)
        for ep in sub.patterns:
            if ep.key not in pool:
                pool[ep.key] = evaluate(ep.tree, project(log, ep.tree.activities()), config.weights)
    ranked = sort_ranking(list(pool.values()))[: config.top_k]
    return MiningResult(ranked, rounds, evaluations)
