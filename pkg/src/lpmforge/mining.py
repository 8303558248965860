"""The core pattern search: candidate generation via leaf expansion with
redundancy restrictions, and the iterative expand / evaluate / select loop.

Expansion replaces one activity leaf at a time. Sequence expansions admit any
second activity; the commutative operators demand a strictly later second
activity and are blocked on the first child of a same-operator parent; loops
never nest directly.

Two pruning modes exist. The default (safe) mode thresholds only which
candidates are selected and skips evaluation of candidates whose support is
already ruled out by a sound upper bound, so the result set provably equals an
unpruned enumeration. The aggressive mode additionally restricts which
expansions are generated, using the two monotonicity facts (sequence,
concurrency, and loop expansions cannot gain support; choice and concurrency
expansions cannot gain determinism); it is faster on larger alphabets but can
drop patterns whose only expansion chain passes through a failing candidate.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from enum import Enum
from typing import Iterable, Optional

from .eventlog import EventLog, project
from .gaps import GapConstraint, Strategy, constrained_instances
from .quality import EvaluatedPattern, RankingWeights, evaluate, sort_ranking
from .tree import (
    ACTIVITY,
    AND,
    LOOP,
    SEQ,
    XOR,
    ProcessTree,
    activity,
    serialize_tree,
    start_activities,
)

ALL_OPERATORS = frozenset((SEQ, XOR, AND, LOOP))


class MinerError(Exception):
    pass


class Pruning(Enum):
    SAFE = "safe"
    AGGRESSIVE = "aggressive"


@dataclass(frozen=True)
class MinerConfig:
    min_support: int = 2
    min_determinism: float = 0.5
    max_iterations: int = 3  # expansion rounds; trees grow to max_iterations+1 leaves
    top_k: int = 20
    weights: RankingWeights = field(default_factory=RankingWeights)
    operators: frozenset = ALL_OPERATORS
    pruning: Pruning = Pruning.SAFE
    gap: Optional[GapConstraint] = None
    gap_strategy: Strategy = Strategy.CACHED_DYNAMIC
    max_alphabet: int = 14
    workers: int = 1

    def __post_init__(self):
        if self.min_support < 1:
            raise ValueError("min_support must be >= 1")
        if self.top_k < 1:
            raise ValueError("top_k must be >= 1")
        if self.max_iterations < 1:
            raise ValueError("max_iterations must be >= 1")


def expand(
    tree: ProcessTree, alphabet: Iterable[str], operators: frozenset = ALL_OPERATORS
) -> set[ProcessTree]:
    """All one-leaf expansions of the tree over the alphabet."""
    alpha = sorted(set(alphabet))
    index = {a: i for i, a in enumerate(alpha)}
    out: set[ProcessTree] = set()

    def replacements(leaf: ProcessTree, parent: Optional[ProcessTree], child_pos: int):
        a = leaf.label
        reps: list[ProcessTree] = []
        if SEQ in operators:
            for b in alpha:
                reps.append(ProcessTree(SEQ, None, (leaf, activity(b))))
        for op in (AND, XOR):
            if op not in operators:
                continue
            if parent is not None and parent.kind == op and child_pos == 0:
                continue  # same-operator first child: the mirror expansion exists
            for b in alpha:
                if index.get(a, -1) < index[b]:
                    reps.append(ProcessTree(op, None, (leaf, activity(b))))
        if LOOP in operators and (parent is None or parent.kind != LOOP):
            reps.append(ProcessTree(LOOP, None, (leaf,)))
        return reps

    def rebuild(node: ProcessTree, path: tuple[int, ...], replacement: ProcessTree) -> ProcessTree:
        if not path:
            return replacement
        i = path[0]
        children = list(node.children)
        children[i] = rebuild(children[i], path[1:], replacement)
        return ProcessTree(node.kind, node.label, tuple(children))

    def walk(node: ProcessTree, parent: Optional[ProcessTree], child_pos: int, path: tuple[int, ...]):
        if node.kind == ACTIVITY:
            for rep in replacements(node, parent, child_pos):
                out.add(rebuild(tree, path, rep))
            return
        for i, c in enumerate(node.children):
            walk(c, node, i, path + (i,))

    walk(tree, None, 0, ())
    return out


def support_upper_bound(tree: ProcessTree, counts: dict[str, int]) -> int:
    """Sound bound: every instance consumes a distinct event whose label is a
    start activity of the pattern."""
    return sum(counts.get(a, 0) for a in start_activities(tree))


@dataclass
class RoundStats:
    round: int
    candidates: int
    evaluated: int
    selected: int
    skipped_by_bound: int
    expansion_restricted: int


@dataclass
class MiningResult:
    patterns: list[EvaluatedPattern]
    rounds: list[RoundStats]
    evaluations: int

    def to_json(self) -> dict:
        return {
            "patterns": [
                {"tree": p.key, "quality": p.quality.to_json(), "instances": p.instances.to_json()}
                for p in self.patterns
            ],
            "rounds": [vars(r) for r in self.rounds],
            "evaluations": self.evaluations,
        }


def _kept_positions(log: EventLog, sigma) -> dict[str, list[int]]:
    return {
        t.id: [i for i, e in enumerate(t.events) if e.activity in sigma] for t in log
    }


def _remap(gamma, mapper) -> "InstanceMultiset":
    from .align import Instance, InstanceMultiset

    return InstanceMultiset(
        [
            (Instance(inst.trace_id, mapper(inst.trace_id, inst.landmarks)), mult)
            for inst, mult in gamma.instances
        ]
    )


def _evaluate_candidate(tree: ProcessTree, log: EventLog, config: MinerConfig) -> EvaluatedPattern:
    """Evaluate on the log projected to the candidate's own alphabet; reported
    instance landmarks index the unprojected traces."""
    sigma = tree.activities()
    projected = project(log, sigma)
    kept = _kept_positions(log, sigma)

    def to_original(tid, landmarks):
        return tuple(kept[tid][i - 1] + 1 for i in landmarks)

    def to_projected(tid, landmarks):
        inverse = {orig: j for j, orig in enumerate(kept[tid])}
        return tuple(inverse[i - 1] + 1 for i in landmarks)

    if config.gap is None:
        ep = evaluate(tree, projected, config.weights)
        ep.instances = _remap(ep.instances, to_original)
        return ep
    # gap distances are measured on the unprojected traces; the extraction
    # handles the alphabet restriction itself
    gamma = constrained_instances(log, tree, config.gap, config.gap_strategy)
    ep = evaluate(tree, projected, config.weights, instances=_remap(gamma, to_projected))
    ep.instances = gamma
    return ep


def mine(log: EventLog, config: MinerConfig = MinerConfig()) -> MiningResult:
    """Expand-evaluate-select for max_iterations rounds of expansion.

    Round r evaluates the r-leaf candidates. Candidates meeting both the
    support and determinism thresholds enter the result pool. In aggressive
    mode a candidate failing only support expands by choice alone, one failing
    only determinism by sequence and loop alone, and one failing both not at
    all; in safe mode every candidate expands fully and only selection is
    thresholded. Structural duplicates are generated once. The top_k pool by
    aggregate score is returned.
    """
    if len(log.alphabet) > config.max_alphabet:
        raise MinerError(
            f"log has {len(log.alphabet)} activities (> {config.max_alphabet}); "
            "use projection-set discovery to split the alphabet first"
        )
    alphabet = sorted(log.alphabet)
    counts = dict(log.activity_counts())
    frontier = [activity(a) for a in alphabet]
    seen: set[str] = {serialize_tree(t) for t in frontier}
    pool: dict[str, EvaluatedPattern] = {}
    rounds: list[RoundStats] = []
    evaluations = 0

    for rnd in range(1, config.max_iterations + 2):
        if not frontier:
            break
        to_eval: list[ProcessTree] = []
        skipped: list[ProcessTree] = []
        for t in frontier:
            if support_upper_bound(t, counts) < config.min_support:
                skipped.append(t)
            else:
                to_eval.append(t)
        if config.workers > 1 and len(to_eval) > 1:
            with ThreadPoolExecutor(max_workers=config.workers) as ex:
                evaluated = list(ex.map(lambda t: _evaluate_candidate(t, log, config), to_eval))
        else:
            evaluated = [_evaluate_candidate(t, log, config) for t in to_eval]
        evaluations += len(evaluated)

        stats = RoundStats(rnd, len(frontier), len(evaluated), 0, len(skipped), 0)
        next_frontier: list[ProcessTree] = []

        def push_expansions(t: ProcessTree, ops: frozenset):
            for t2 in expand(t, alphabet, ops):
                key = serialize_tree(t2)
                if key not in seen:
                    seen.add(key)
                    next_frontier.append(t2)

        for ep in evaluated:
            ok_support = ep.quality.support >= config.min_support
            ok_det = ep.quality.determinism >= config.min_determinism
            if ok_support and ok_det:
                stats.selected += 1
                pool[ep.key] = ep
                ops = config.operators
            elif config.pruning is Pruning.SAFE:
                ops = config.operators
                stats.expansion_restricted += 1
            elif ok_det:  # support failed: only choice can recover support
                ops = config.operators & {XOR}
                stats.expansion_restricted += 1
            elif ok_support:  # determinism failed: choice/concurrency cannot recover it
                ops = config.operators & {SEQ, LOOP}
                stats.expansion_restricted += 1
            else:
                ops = frozenset()
                stats.expansion_restricted += 1
            if ops and rnd <= config.max_iterations:
                push_expansions(ep.tree, ops)
        if rnd <= config.max_iterations:
            for t in skipped:
                # below the support bound the candidate cannot be selected, but
                # its expansions may recover support through choice
                ops = config.operators if config.pruning is Pruning.SAFE else config.operators & {XOR}
                push_expansions(t, ops)
        rounds.append(stats)
        frontier = sorted(next_frontier, key=serialize_tree)

    ranked = sort_ranking(list(pool.values()))[: config.top_k]
    return MiningResult(ranked, rounds, evaluations)


def enumerate_all(log: EventLog, config: MinerConfig) -> MiningResult:
    """Pruning-free reference: expand everything for the same number of rounds,
    evaluate every tree, and keep those meeting the thresholds."""
    alphabet = sorted(log.alphabet)
    frontier = [activity(a) for a in alphabet]
    seen = {serialize_tree(t) for t in frontier}
    all_trees: list[ProcessTree] = list(frontier)
    for _ in range(config.max_iterations):
        nxt = []
        for t in frontier:
            for t2 in expand(t, alphabet, config.operators):
                key = serialize_tree(t2)
                if key not in seen:
                    seen.add(key)
                    nxt.append(t2)
        frontier = nxt
        all_trees.extend(frontier)
    pool = []
    for t in all_trees:
        ep = _evaluate_candidate(t, log, config)
        if ep.quality.support >= config.min_support and ep.quality.determinism >= config.min_determinism:
            pool.append(ep)
    ranked = sort_ranking(pool)[: config.top_k]
    return MiningResult(ranked, [], len(all_trees))
