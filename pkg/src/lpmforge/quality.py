"""Per-pattern quality measures, ranking, conformance measures (ratio of
fitting traces, alignment-based fitness, escaping-edges precision), and the
ranking-comparison metrics recall@k and NDCG@k.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional, Sequence

from .align import (
    STANDARD,
    Alignment,
    InstanceMultiset,
    align,
    extract_instances_on_net,
    replay_profile_on_net,
)
from .eventlog import EventLog
from .petri import (
    AcceptingPetriNet,
    enabled as net_enabled,
    fire,
    shortest_visible_path_length,
    to_instance_counter,
    to_petri_net,
)
from .tree import BudgetExceededError, ProcessTree, bounded_language, serialize_tree


@dataclass(frozen=True)
class RankingWeights:
    support: float = 0.2
    confidence: float = 0.2
    language_fit: float = 0.2
    determinism: float = 0.2
    coverage: float = 0.2
    squash_constant: Optional[float] = None  # default: trace count of the log
    language_bound: Optional[int] = None  # default: longest trace length

    def __post_init__(self):
        vals = self.as_tuple()
        if any(w < 0 for w in vals):
            raise ValueError("weights must be non-negative")
        if not any(vals):
            raise ValueError("at least one weight must be positive")
        if self.squash_constant is not None and self.squash_constant <= 0:
            raise ValueError("squash constant must be positive")

    def as_tuple(self) -> tuple[float, float, float, float, float]:
        return (self.support, self.confidence, self.language_fit, self.determinism, self.coverage)


@dataclass(frozen=True)
class QualityVector:
    support: int
    confidence: float
    language_fit: Optional[float]  # None when enumeration blew the budget
    determinism: float
    coverage: float
    normalized_support: float
    aggregate: float

    def to_json(self) -> dict:
        return {
            "support": self.support,
            "confidence": self.confidence,
            "language_fit": self.language_fit,
            "determinism": self.determinism,
            "coverage": self.coverage,
            "normalized_support": self.normalized_support,
            "aggregate": self.aggregate,
        }

    @staticmethod
    def from_json(obj: dict) -> "QualityVector":
        return QualityVector(
            obj["support"],
            obj["confidence"],
            obj["language_fit"],
            obj["determinism"],
            obj["coverage"],
            obj["normalized_support"],
            obj["aggregate"],
        )


def aggregate_score(
    weights: RankingWeights,
    normalized_support: float,
    confidence: float,
    language_fit: Optional[float],
    determinism: float,
    coverage: float,
) -> float:
    ws = weights.as_tuple()
    measures = [normalized_support, confidence, language_fit, determinism, coverage]
    num = den = 0.0
    for w, m in zip(ws, measures):
        if m is None:
            continue  # unavailable measure: renormalize over the rest
        num += w * m
        den += w
    return num / den if den > 0 else 0.0


@dataclass
class EvaluatedPattern:
    tree: ProcessTree
    quality: QualityVector
    instances: InstanceMultiset
    activity_totals: dict[str, int] = field(default_factory=dict)
    activity_fitting: dict[str, int] = field(default_factory=dict)

    @property
    def key(self) -> str:
        return serialize_tree(self.tree)


def evaluate(
    pattern: ProcessTree,
    log: EventLog,
    weights: RankingWeights = RankingWeights(),
    instances: Optional[InstanceMultiset] = None,
) -> EvaluatedPattern:
    """All five measures plus the weighted aggregate.

    support counts the non-overlapping instances; confidence is the harmonic
    mean over the pattern's activities of the fitting-event ratios; language
    fit compares observed instance words against the n-bounded language;
    determinism comes from the replay profile; coverage divides instance
    events by the unprojected log's event total.
    """
    counter_net = to_instance_counter(to_petri_net(pattern))
    if instances is None:
        instances = extract_instances_on_net(pattern, counter_net, log)
    support = instances.support()

    sigma = sorted(pattern.activities())
    totals = {a: 0 for a in sigma}
    for t in log:
        for e in t.events:
            if e.activity in totals:
                totals[e.activity] += 1
    fitting = {a: 0 for a in sigma}
    label_of = {t.id: t.labels for t in log}
    for inst, mult in instances.instances:
        labels = label_of[inst.trace_id]
        for i in inst.landmarks:
            fitting[labels[i - 1]] += mult

    if any(totals[a] == 0 or fitting[a] == 0 for a in sigma):
        confidence = 0.0
    else:
        confidence = len(sigma) / sum(totals[a] / fitting[a] for a in sigma)

    n = weights.language_bound
    if n is None:
        n = max((len(t) for t in log), default=1)
    try:
        lang = bounded_language(pattern, n)
        if lang:
            observed = {w for w, _ in instances.words(label_of) if w in lang}
            language_fit: Optional[float] = len(observed) / len(lang)
        else:
            language_fit = 0.0
    except BudgetExceededError:
        language_fit = None

    determinism = replay_profile_on_net(pattern, counter_net, log).determinism

    total_events = log.total_events()
    coverage = instances.total_events() / total_events if total_events else 0.0

    c = weights.squash_constant if weights.squash_constant is not None else max(len(log), 1)
    normalized_support = support / (support + c)

    agg = aggregate_score(weights, normalized_support, confidence, language_fit, determinism, coverage)
    qv = QualityVector(support, confidence, language_fit, determinism, coverage, normalized_support, agg)
    return EvaluatedPattern(pattern, qv, instances, totals, fitting)


def rank(
    patterns: Sequence[ProcessTree],
    log: EventLog,
    weights: RankingWeights = RankingWeights(),
) -> list[EvaluatedPattern]:
    """Evaluate and order descending by aggregate; ties broken by support
    descending, then serialized tree text ascending."""
    evaluated = [evaluate(p, log, weights) for p in patterns]
    return sort_ranking(evaluated)


def sort_ranking(evaluated: list[EvaluatedPattern]) -> list[EvaluatedPattern]:
    return sorted(
        evaluated, key=lambda ep: (-ep.quality.aggregate, -ep.quality.support, ep.key)
    )


# ---------------------------------------------------------------------------
# conformance measures


def rft_fitness(log: EventLog, net: AcceptingPetriNet) -> float:
    """Ratio of traces whose variant the net accepts (zero-deviation alignment)."""
    if len(log) == 0:
        return 0.0
    counts = log.variant_counts()
    fitting = 0
    for variant, mult in counts.items():
        if align(net, variant, STANDARD).deviation_cost == 0:
            fitting += mult
    return fitting / len(log)


def abf_fitness(log: EventLog, net: AcceptingPetriNet) -> float:
    """Alignment-based fitness: one minus the ratio of the summed optimal
    deviation costs to the summed worst-case costs, where the worst case is
    all-log-moves plus the shortest visible model path."""
    shortest = shortest_visible_path_length(net)
    counts = log.variant_counts()
    opt = worst = 0
    for variant, mult in counts.items():
        a = align(net, variant, STANDARD)
        opt += a.deviation_cost * mult
        worst += (len(variant) + shortest) * mult
    if worst == 0:
        return 1.0
    return 1.0 - opt / worst


def _tau_closure_enabled_edges(net: AcceptingPetriNet, marking) -> frozenset[int]:
    """Visible transitions executable from the marking after any number of
    silent firings. Silent transitions contribute their successors, not
    themselves; edges are transition-granular so that duplicate labels (e.g.
    the same activity owned by two merged patterns) count separately."""
    seen = {marking}
    stack = [marking]
    edges: set[int] = set()
    while stack:
        m = stack.pop()
        for t in net_enabled(net, m):
            if t.silent:
                m2 = fire(net, m, t.id)
                if m2 not in seen:
                    seen.add(m2)
                    stack.append(m2)
            else:
                edges.add(t.id)
    return frozenset(edges)


def alignment_automaton(
    net: AcceptingPetriNet,
    aligned: list[tuple[Alignment, int]],
) -> tuple[dict, dict, dict]:
    """Prefix automaton of the aligned model-side visible behavior.

    States are visible-transition prefixes; each carries the total visit count,
    the set of observed next edges, and the set of model-enabled next edges
    (computed through the tau closure at the marking reached).
    """
    weight: dict[tuple[int, ...], int] = {}
    observed: dict[tuple[int, ...], set[int]] = {}
    enabled_edges: dict[tuple[int, ...], frozenset[int]] = {}

    for alignment, mult in aligned:
        marking = net.initial
        prefix: tuple[int, ...] = ()
        weight[prefix] = weight.get(prefix, 0) + mult
        observed.setdefault(prefix, set())
        if prefix not in enabled_edges:
            enabled_edges[prefix] = _tau_closure_enabled_edges(net, marking)
        for move in alignment.moves:
            if move.transition is None:
                continue
            t = net.transitions[move.transition]
            marking = fire(net, marking, t.id)
            if t.silent:
                continue
            observed[prefix].add(t.id)
            prefix = prefix + (t.id,)
            weight[prefix] = weight.get(prefix, 0) + mult
            observed.setdefault(prefix, set())
            if prefix not in enabled_edges:
                enabled_edges[prefix] = _tau_closure_enabled_edges(net, marking)
    return weight, observed, enabled_edges


def etc_precision(
    log: EventLog,
    net: AcceptingPetriNet,
    policy=STANDARD,
) -> float:
    """One-align escaping-edges precision: states weighted by visit count,
    numerator counts observed outgoing labels, denominator model-enabled ones."""
    counts = log.variant_counts()
    aligned = [(align(net, variant, policy), mult) for variant, mult in sorted(counts.items())]
    weight, observed, enabled_edges = alignment_automaton(net, aligned)
    num = den = 0.0
    for prefix, w in weight.items():
        num += w * len(observed[prefix])
        den += w * len(enabled_edges[prefix])
    if den == 0.0:
        return 1.0
    return num / den


# ---------------------------------------------------------------------------
# ranking-agreement metrics


def dcg_at_k(relevances: Sequence[float], k: int) -> float:
    return sum(rel / math.log2(i + 2) for i, rel in enumerate(relevances[:k]))


def ndcg_at_k(ranking: Sequence[float], ideal: Sequence[float], k: int) -> float:
    """ranking/ideal are relevance sequences in rank order (aggregate scores)."""
    if k < 1:
        raise ValueError("k must be >= 1")
    dcg = dcg_at_k(ranking, k)
    idcg = dcg_at_k(ideal, k)
    if idcg == 0.0:
        if dcg == 0.0:
            return 1.0
        raise ValueError("IDCG is zero but DCG is not; ideal ranking is not ideal")
    return dcg / idcg


def recall_at_k(ranking: Sequence[str], ideal: Sequence[str], k: int) -> float:
    """Fraction of the ideal top-k identities present in the obtained top-k."""
    if k < 1:
        raise ValueError("k must be >= 1")
    top = set(ranking[:k])
    ideal_top = set(ideal[:k])
    return len(top & ideal_top) / k
