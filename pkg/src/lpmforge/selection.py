"""Non-redundant pattern-set construction.

A pattern list is scored as a whole by merging the patterns into one global
model (shared initial/final place plus a backloop), aligning every trace with
log moves and silent model moves only, and attributing each synchronous event
to the pattern that owns the fired transition. Coverage is the fraction of
explained events; non-redundancy is the escaping-edges precision of the global
model against the aligned behavior; their harmonic mean is the F-score.
"""

from __future__ import annotations

from dataclasses import dataclass

from .align import INSTANCE_COUNTING, align
from .eventlog import EventLog, Trace
from .petri import AcceptingPetriNet, merge_global, to_petri_net
from .quality import alignment_automaton
from .tree import ProcessTree


@dataclass(frozen=True)
class LpmSetScore:
    coverage: float
    non_redundancy: float
    fscore: float
    per_pattern_instances: tuple[int, ...]
    explained_events: int
    total_events: int

    def to_json(self) -> dict:
        return {
            "coverage": self.coverage,
            "non_redundancy": self.non_redundancy,
            "fscore": self.fscore,
            "per_pattern_instances": list(self.per_pattern_instances),
            "explained_events": self.explained_events,
            "total_events": self.total_events,
        }


def _harmonic(a: float, b: float) -> float:
    if a <= 0.0 or b <= 0.0:
        return 0.0
    return 2 * a * b / (a + b)


@dataclass
class GlobalAttribution:
    """Per-trace segmentation of the merged-model alignment into instances."""

    instances: list[tuple[str, int, tuple[int, ...]]]  # (trace id, pattern idx, landmarks)
    explained: dict[str, set[int]]  # trace id -> 0-based explained positions

    def instance_counts(self, n: int) -> tuple[int, ...]:
        counts = [0] * n
        for _, idx, _ in self.instances:
            counts[idx] += 1
        return tuple(counts)


def attribute_global(log: EventLog, patterns: list[ProcessTree]) -> tuple[GlobalAttribution, AcceptingPetriNet, list]:
    """Align every trace on the merged global model; cut at backloop firings;
    assign each segment to the pattern owning its transitions."""
    nets = [to_petri_net(p) for p in patterns]
    merged = merge_global(nets)
    instances: list[tuple[str, int, tuple[int, ...]]] = []
    explained: dict[str, set[int]] = {}
    aligned = []
    variants: dict[tuple[str, ...], object] = {}
    for t in log:
        variant = t.labels
        if variant not in variants:
            variants[variant] = align(merged, variant, INSTANCE_COUNTING)
        alignment = variants[variant]
        aligned.append((t, alignment))
        hits = explained.setdefault(t.id, set())
        current: list[int] = []
        current_pattern: int | None = None
        for move in alignment.moves:
            if move.is_sync:
                t_obj = merged.transitions[move.transition]
                current.append(move.log_index)
                current_pattern = t_obj.src_pattern
                hits.add(move.log_index)
            elif move.is_model and move.transition in merged.backloops:
                if current:
                    instances.append((t.id, current_pattern, tuple(i + 1 for i in current)))
                current = []
                current_pattern = None
        if current:
            instances.append((t.id, current_pattern, tuple(i + 1 for i in current)))
    return GlobalAttribution(instances, explained), merged, aligned


def score_set(log: EventLog, patterns: list[ProcessTree]) -> LpmSetScore:
    total = log.total_events()
    if not patterns:
        return LpmSetScore(0.0, 0.0, 0.0, (), 0, total)
    attribution, merged, aligned = attribute_global(log, patterns)
    explained = sum(len(v) for v in attribution.explained.values())
    coverage = explained / total if total else 0.0

    by_alignment: dict = {}
    for t, alignment in aligned:
        key = id(alignment)
        if key not in by_alignment:
            by_alignment[key] = [alignment, 0]
        by_alignment[key][1] += 1
    weight, observed, enabled_edges = alignment_automaton(
        merged, [(a, m) for a, m in by_alignment.values()]
    )
    num = den = 0.0
    for prefix, w in weight.items():
        num += w * len(observed[prefix])
        den += w * len(enabled_edges[prefix])
    non_redundancy = num / den if den else 0.0
    return LpmSetScore(
        coverage,
        non_redundancy,
        _harmonic(coverage, non_redundancy),
        attribution.instance_counts(len(patterns)),
        explained,
        total,
    )


def select_alignment(log: EventLog, patterns: list[ProcessTree]) -> list[ProcessTree]:
    """Keep exactly the patterns that receive at least one instance in the
    merged-model alignment; order preserved."""
    if not patterns:
        return []
    attribution, _, _ = attribute_global(log, patterns)
    counts = attribution.instance_counts(len(patterns))
    return [p for p, c in zip(patterns, counts) if c > 0]


def select_greedy(log: EventLog, patterns: list[ProcessTree]) -> list[ProcessTree]:
    """Iteratively take the pattern explaining the most residual events,
    removing explained events from the log; ties by input order."""
    from .align import extract_instances

    selected: list[ProcessTree] = []
    candidates = list(patterns)
    residual = log
    while candidates:
        best_idx = -1
        best_explained = 0
        best_positions: dict[str, set[int]] = {}
        for i, p in enumerate(candidates):
            gamma = extract_instances(p, residual)
            explained = gamma.total_events()
            if explained > best_explained:
                best_explained = explained
                best_idx = i
                positions: dict[str, set[int]] = {}
                for inst, mult in gamma.instances:
                    positions.setdefault(inst.trace_id, set()).update(
                        i0 - 1 for i0 in inst.landmarks
                    )
                best_positions = positions
        if best_idx < 0:
            break
        selected.append(candidates.pop(best_idx))
        residual = _mask_positions(residual, best_positions)
    return selected


def _mask_positions(log: EventLog, positions: dict[str, set[int]]) -> EventLog:
    traces = []
    for t in log:
        drop = positions.get(t.id, set())
        traces.append(Trace(t.id, tuple(e for i, e in enumerate(t.events) if i not in drop)))
    return EventLog(traces)


def select_greedy_fscore(log: EventLog, patterns: list[ProcessTree]) -> list[ProcessTree]:
    """Iteratively add the candidate maximizing the set F-score; stop when no
    addition strictly improves it; ties by input order."""
    selected: list[ProcessTree] = []
    candidates = list(patterns)
    best_fscore = 0.0
    while candidates:
        best_idx = -1
        round_best = best_fscore
        for i, p in enumerate(candidates):
            fs = score_set(log, selected + [p]).fscore
            if fs > round_best:
                round_best = fs
                best_idx = i
        if best_idx < 0:
            break
        selected.append(candidates.pop(best_idx))
        best_fscore = round_best
    return selected


def diversity_filter(patterns: list[ProcessTree], threshold: float) -> list[ProcessTree]:
    """Keep the head; keep each later pattern whose minimal Jaccard distance of
    activity alphabets to every kept pattern is at least the threshold."""
    if not patterns:
        raise ValueError("diversity filter needs a non-empty list")
    kept = [patterns[0]]
    for p in patterns[1:]:
        sigma = p.activities()
        min_dist = min(_jaccard_distance(sigma, q.activities()) for q in kept)
        if min_dist >= threshold:
            kept.append(p)
    return kept


def _jaccard_distance(a: frozenset[str], b: frozenset[str]) -> float:
    union = len(a | b)
    if union == 0:
        return 0.0
    return (union - len(a & b)) / union
