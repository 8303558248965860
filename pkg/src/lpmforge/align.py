"""Optimal trace-to-net alignments via lexicographic shortest path, instance
extraction, and the replay profile behind the determinism measure.

Cost is a lexicographic triple: tier 1 counts log moves plus (in STANDARD
mode) labeled model moves; tier 2 counts backloop firings, i.e. pattern
instances; tier 3 counts the remaining silent model moves. The tiny-epsilon
cost the literature assigns to silent moves is realized by the lower tiers,
but instance count gets its own tier because a pattern whose branches differ
in silent overhead (say, a loop branch against a direct one) could otherwise
buy fewer silent firings with more instances, breaking the minimal-multiset
guarantee.

INSTANCE_COUNTING mode forbids model moves on labeled transitions entirely:
an occurrence must be a complete execution of the pattern, and the backloop
firings of the transformed net delimit occurrences.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass
from enum import Enum
from typing import Callable, Optional

from .eventlog import EventLog, project
from .petri import AcceptingPetriNet, Marking, fire, to_instance_counter, to_petri_net
from .tree import ProcessTree


class AlignmentError(Exception):
    pass


class PolicyMode(Enum):
    STANDARD = "standard"
    INSTANCE_COUNTING = "instance-counting"


@dataclass(frozen=True)
class CostPolicy:
    mode: PolicyMode = PolicyMode.STANDARD
    use_heuristic: bool = True

    @property
    def allows_labeled_model_moves(self) -> bool:
        return self.mode is PolicyMode.STANDARD


STANDARD = CostPolicy(PolicyMode.STANDARD)
INSTANCE_COUNTING = CostPolicy(PolicyMode.INSTANCE_COUNTING)


@dataclass(frozen=True)
class Move:
    log_index: Optional[int]  # 0-based position in the aligned trace, or None
    transition: Optional[int]  # transition id, or None for a log move

    @property
    def is_sync(self) -> bool:
        return self.log_index is not None and self.transition is not None

    @property
    def is_log(self) -> bool:
        return self.transition is None

    @property
    def is_model(self) -> bool:
        return self.log_index is None and self.transition is not None


@dataclass(frozen=True)
class Alignment:
    moves: tuple[Move, ...]
    deviation_cost: int  # tier 1: log moves (+ labeled model moves when allowed)
    backloop_moves: int  # tier 2: instance count on transformed nets
    silent_moves: int  # tier 3: other silent model moves

    @property
    def sync_count(self) -> int:
        return sum(1 for m in self.moves if m.is_sync)

    @property
    def log_move_count(self) -> int:
        return sum(1 for m in self.moves if m.is_log)

    def counts(self, net: AcceptingPetriNet) -> dict[str, int]:
        labeled_model = sum(
            1
            for m in self.moves
            if m.is_model and not net.transitions[m.transition].silent
        )
        silent_model = sum(
            1 for m in self.moves if m.is_model and net.transitions[m.transition].silent
        )
        return {
            "sync": self.sync_count,
            "log": self.log_move_count,
            "model_labeled": labeled_model,
            "model_silent": silent_model,
        }

    def to_json(self, net: AcceptingPetriNet) -> dict:
        return {
            "moves": [
                {
                    "log_index": m.log_index,
                    "transition": m.transition,
                    "label": None
                    if m.transition is None
                    else net.transitions[m.transition].label,
                }
                for m in self.moves
            ],
            "deviation_cost": self.deviation_cost,
            "backloop_moves": self.backloop_moves,
            "silent_moves": self.silent_moves,
        }


# gate(last_anchor, log_position) -> bool; used by gap-constrained counting.
SyncGate = Callable[[Optional[int], int], bool]


def align(
    net: AcceptingPetriNet,
    trace: tuple[str, ...],
    policy: CostPolicy = STANDARD,
    sync_gate: Optional[SyncGate] = None,
) -> Alignment:
    """Cost-minimal alignment under the two-tier order, deterministic.

    Ties are broken by expanding transitions in ascending id with the log move
    last; among equal-cost frontier entries the earliest-inserted wins. The
    optional sync gate restricts synchronous moves (gap constraints): it sees
    the previous synchronous position within the current instance (None at an
    instance start) and the candidate position.
    """
    labels = net.labels()
    if policy.use_heuristic:
        # events that can never synchronize must become log moves
        suffix_unmatched = [0] * (len(trace) + 1)
        for i in range(len(trace) - 1, -1, -1):
            suffix_unmatched[i] = suffix_unmatched[i + 1] + (0 if trace[i] in labels else 1)
        h = suffix_unmatched.__getitem__
    else:
        h = lambda _pos: 0

    backloops = net.backloops
    finals = set(net.finals)
    start_anchor: Optional[int] = None
    start = (net.initial, 0, start_anchor)
    infinity = (1 << 30, 1 << 30, 1 << 30)
    best: dict = {start: (0, 0, 0)}  # state -> (tier1, tier2, tier3)
    counter = 0
    heap: list = [(h(0), 0, 0, counter, start, None)]  # f1, g2, g3, seq, state, back
    parents: dict = {}
    g1_of = {start: 0}

    gated = sync_gate is not None
    while heap:
        _f1, g2, g3, _, state, back = heapq.heappop(heap)
        marking, pos, anchor = state
        g1 = g1_of[state]
        if best.get(state, infinity) < (g1, g2, g3):
            continue
        if state not in parents:
            parents[state] = back
        if pos == len(trace) and marking in finals:
            return _reconstruct(parents, state, g1, g2, g3)

        def push(nstate, ng1, ng2, ng3, move):
            nonlocal counter
            if (ng1, ng2, ng3) < best.get(nstate, infinity):
                best[nstate] = (ng1, ng2, ng3)
                g1_of[nstate] = ng1
                counter += 1
                heapq.heappush(
                    heap, (ng1 + h(nstate[1]), ng2, ng3, counter, nstate, (state, move))
                )

        have = _counter_cache(net, marking)
        for tid in sorted(net.transitions):
            t = net.transitions[tid]
            if not all(have.get(p, 0) >= k for p, k in net.pre[tid].items()):
                continue
            m2 = fire(net, marking, tid)
            if t.silent:
                if tid in backloops:
                    push((m2, pos, None), g1, g2 + 1, g3, Move(None, tid))
                else:
                    push((m2, pos, anchor), g1, g2, g3 + 1, Move(None, tid))
            else:
                if pos < len(trace) and trace[pos] == t.label:
                    if not gated or sync_gate(anchor, pos):
                        push((m2, pos + 1, pos if gated else None), g1, g2, g3, Move(pos, tid))
                if policy.allows_labeled_model_moves:
                    push((m2, pos, anchor), g1 + 1, g2, g3, Move(None, tid))
        if pos < len(trace):
            push((marking, pos + 1, anchor), g1 + 1, g2, g3, Move(pos, None))

    raise AlignmentError(
        "no alignment reaches a final marking; the net cannot complete "
        "without labeled model moves"
    )


def _counter_cache(net: AcceptingPetriNet, marking: Marking) -> dict[int, int]:
    have: dict[int, int] = {}
    for p in marking:
        have[p] = have.get(p, 0) + 1
    return have


def _reconstruct(parents, state, g1, g2, g3) -> Alignment:
    moves = []
    while True:
        back = parents.get(state)
        if back is None:
            break
        prev, move = back
        moves.append(move)
        state = prev
    moves.reverse()
    return Alignment(tuple(moves), g1, g2, g3)


# ---------------------------------------------------------------------------
# instance extraction


@dataclass(frozen=True)
class Instance:
    trace_id: str
    landmarks: tuple[int, ...]  # 1-based indices into the unprojected trace

    def span(self) -> tuple[int, int]:
        return self.landmarks[0], self.landmarks[-1]


@dataclass
class InstanceMultiset:
    instances: list[tuple[Instance, int]]  # (instance, multiplicity)

    def support(self) -> int:
        return sum(mult for _, mult in self.instances)

    def total_events(self) -> int:
        return sum(len(inst.landmarks) * mult for inst, mult in self.instances)

    def words(self, variant_of: dict[str, tuple[str, ...]]) -> list[tuple[tuple[str, ...], int]]:
        out = []
        for inst, mult in self.instances:
            labels = variant_of[inst.trace_id]
            out.append((tuple(labels[i - 1] for i in inst.landmarks), mult))
        return out

    def to_json(self) -> list:
        return [
            {"trace": inst.trace_id, "landmarks": list(inst.landmarks), "count": mult}
            for inst, mult in self.instances
        ]


def instances_from_alignment(
    alignment: Alignment,
    net: AcceptingPetriNet,
    trace_id: str,
    position_map: Optional[list[int]] = None,
) -> list[Instance]:
    """Cut the alignment at backloop firings; each maximal run of synchronous
    moves becomes one instance. Landmarks are reported 1-based against the
    original trace via the position map (projected index -> original index)."""
    out: list[Instance] = []
    current: list[int] = []
    for move in alignment.moves:
        if move.is_sync:
            idx = move.log_index
            orig = position_map[idx] if position_map is not None else idx
            current.append(orig + 1)
        elif move.is_model and move.transition in net.backloops:
            if current:
                out.append(Instance(trace_id, tuple(current)))
            current = []
    if current:  # completed instances always end with a backloop firing
        out.append(Instance(trace_id, tuple(current)))
    return out


def extract_instances(
    pattern: ProcessTree,
    log: EventLog,
    sync_gate_factory: Optional[Callable[[tuple[str, ...], list[int], str], SyncGate]] = None,
) -> InstanceMultiset:
    """The minimal multiset of maximal non-overlapping instances of the pattern.

    The log is projected on the pattern alphabet, each distinct projected
    variant is aligned once on the instance-counting net, and landmarks are
    mapped back to unprojected positions. The optional gate factory receives
    (variant labels, original position map, trace id) and returns a sync gate,
    which is how gap constraints restrict counting.
    """
    counter_net = to_instance_counter(to_petri_net(pattern))
    return extract_instances_on_net(pattern, counter_net, log, sync_gate_factory)


def extract_instances_on_net(
    pattern: ProcessTree,
    counter_net: AcceptingPetriNet,
    log: EventLog,
    sync_gate_factory=None,
) -> InstanceMultiset:
    sigma = pattern.activities()
    # group traces by projected variant, keeping one representative per group
    # unless gates differ per trace (timestamps), in which case align per trace
    out: list[tuple[Instance, int]] = []
    if sync_gate_factory is None:
        groups: dict[tuple[str, ...], list[tuple[str, list[int]]]] = {}
        for t in log:
            variant = []
            pmap = []
            for i, e in enumerate(t.events):
                if e.activity in sigma:
                    variant.append(e.activity)
                    pmap.append(i)
            groups.setdefault(tuple(variant), []).append((t.id, pmap))
        for variant, members in groups.items():
            if not variant:
                continue
            alignment = align(counter_net, variant, INSTANCE_COUNTING)
            rep_id = members[0][0]
            proj_instances = instances_from_alignment(alignment, counter_net, rep_id, None)
            for (tid, pmap) in members:
                for inst in proj_instances:
                    landmarks = tuple(pmap[i - 1] + 1 for i in inst.landmarks)
                    out.append((Instance(tid, landmarks), 1))
    else:
        for t in log:
            variant = []
            pmap = []
            for i, e in enumerate(t.events):
                if e.activity in sigma:
                    variant.append(e.activity)
                    pmap.append(i)
            if not variant:
                continue
            gate = sync_gate_factory(tuple(variant), pmap, t.id)
            alignment = align(counter_net, tuple(variant), INSTANCE_COUNTING, sync_gate=gate)
            for inst in instances_from_alignment(alignment, counter_net, t.id, pmap):
                out.append((inst, 1))
    merged: dict[Instance, int] = {}
    for inst, mult in out:
        merged[inst] = merged.get(inst, 0) + mult
    return InstanceMultiset(sorted(merged.items(), key=lambda kv: (kv[0].trace_id, kv[0].landmarks)))


# ---------------------------------------------------------------------------
# replay profile / determinism


@dataclass(frozen=True)
class ReplayProfile:
    enabled_counts: tuple[int, ...]
    firings: int
    enabled_total: int

    @property
    def determinism(self) -> float:
        if self.firings == 0:
            return 1.0  # vacuous: nothing was replayed, no choice was observed
        return self.firings / self.enabled_total


def replay_profile(pattern: ProcessTree, log: EventLog) -> ReplayProfile:
    counter_net = to_instance_counter(to_petri_net(pattern))
    return replay_profile_on_net(pattern, counter_net, log)


def replay_profile_on_net(
    pattern: ProcessTree, counter_net: AcceptingPetriNet, log: EventLog
) -> ReplayProfile:
    """Replay each projected variant's instance-counting alignment; before every
    model-side firing record how many transitions were enabled."""
    from .petri import enabled as net_enabled

    sigma = pattern.activities()
    variants: dict[tuple[str, ...], int] = {}
    for t in log:
        variant = tuple(e.activity for e in t.events if e.activity in sigma)
        if variant:
            variants[variant] = variants.get(variant, 0) + 1
    counts: list[int] = []
    firings = 0
    total = 0
    for variant, mult in sorted(variants.items()):
        alignment = align(counter_net, variant, INSTANCE_COUNTING)
        marking = counter_net.initial
        per_variant: list[int] = []
        for move in alignment.moves:
            if move.transition is None:
                continue
            per_variant.append(len(net_enabled(counter_net, marking)))
            marking = fire(counter_net, marking, move.transition)
        counts.extend(per_variant)  # one entry per distinct variant
        firings += len(per_variant) * mult
        total += sum(per_variant) * mult
    return ReplayProfile(tuple(counts), firings, total)
