"""Event-gap and time-gap constrained support counting.

A gap constraint bounds, for consecutive landmark entries of an instance, the
number of skipped events (event gap) or the timestamp difference (time gap).
Counting uses a gap-aware alignment: synchronous moves whose distance to the
previous landmark entry of the same instance exceeds the bound are simply not
available to the search, so the result is the maximal non-overlapping set of
satisfying instances, with the usual minimal-count preference.

Two log extractors shrink the input first: the dynamic extractor walks forward
from every start-activity event collecting pattern-alphabet events within the
gap bound (pattern specific, cacheable per alphabet/start/constraint); the
static extractor splits traces at large time jumps (pattern independent).
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Optional, Union

from .align import Instance, InstanceMultiset, extract_instances
from .eventlog import Event, EventLog, LogError, Trace
from .tree import ProcessTree, start_activities


class GapKind(Enum):
    EVENT = "event"
    TIME = "time"


class Strategy(Enum):
    DYNAMIC = "dynamic"
    STATIC = "static"
    CACHED_DYNAMIC = "cached-dynamic"


@dataclass(frozen=True)
class GapConstraint:
    kind: GapKind
    max_gap: Union[int, float]  # events skipped, or milliseconds

    def __post_init__(self):
        if self.kind is GapKind.EVENT and self.max_gap < 0:
            raise ValueError("event gap must be >= 0")
        if self.kind is GapKind.TIME and self.max_gap <= 0:
            raise ValueError("time gap must be > 0")


def event_gap(max_gap: int) -> GapConstraint:
    return GapConstraint(GapKind.EVENT, max_gap)


def time_gap(max_gap_ms: float) -> GapConstraint:
    return GapConstraint(GapKind.TIME, max_gap_ms)


def instance_satisfies(trace: Trace, instance: Instance, constraint: GapConstraint) -> bool:
    """Check an instance's landmarks against the constraint (1-based indices)."""
    lam = instance.landmarks
    for prev, cur in zip(lam, lam[1:]):
        if constraint.kind is GapKind.EVENT:
            if cur - prev - 1 > constraint.max_gap:
                return False
        else:
            t1 = trace.events[prev - 1].timestamp
            t2 = trace.events[cur - 1].timestamp
            if t1 is None or t2 is None:
                raise LogError(
                    f"time gap constraint on trace {trace.id!r} with missing timestamps"
                )
            if t2 - t1 > constraint.max_gap:
                return False
    return True


# ---------------------------------------------------------------------------
# extractors


def _distance(constraint: GapConstraint, trace: Trace, j: int, k: int) -> float:
    """Distance from event j to the later event k (0-based original indices)."""
    if constraint.kind is GapKind.EVENT:
        return k - j - 1
    t1, t2 = trace.events[j].timestamp, trace.events[k].timestamp
    if t1 is None or t2 is None:
        raise LogError(f"time gap constraint on trace {trace.id!r} with missing timestamps")
    return t2 - t1


@dataclass
class ExtractedLog:
    log: EventLog
    origins: dict[str, tuple[str, tuple[int, ...]]]  # new trace id -> (source id, 0-based positions)


def _extract_dynamic(
    log: EventLog, pattern: ProcessTree, constraint: GapConstraint
) -> ExtractedLog:
    sigma = pattern.activities()
    starts = start_activities(pattern)
    traces: list[Trace] = []
    origins: dict[str, tuple[str, tuple[int, ...]]] = {}
    for t in log:
        skip: set[int] = set()
        for i, e in enumerate(t.events):
            if e.activity not in starts or i in skip:
                continue
            j = i  # last included event
            k = i
            included: list[int] = []
            while k < len(t.events) and _distance(constraint, t, j, k) <= constraint.max_gap:
                if t.events[k].activity in sigma:
                    included.append(k)
                    j = k
                skip.add(k)
                k += 1
            new_id = f"{t.id}@{i + 1}"
            traces.append(Trace(new_id, tuple(t.events[p] for p in included)))
            origins[new_id] = (t.id, tuple(included))
    return ExtractedLog(EventLog(traces), origins)


def extract_dynamic(log: EventLog, pattern: ProcessTree, constraint: GapConstraint) -> EventLog:
    return _extract_dynamic(log, pattern, constraint).log


def _extract_static(log: EventLog, max_time_gap: float) -> ExtractedLog:
    traces: list[Trace] = []
    origins: dict[str, tuple[str, tuple[int, ...]]] = {}
    for t in log:
        for e in t.events:
            if e.timestamp is None:
                raise LogError(f"missing timestamp in trace {t.id!r}; static split needs full timestamps")
        segment: list[int] = []
        seg_no = 1

        def emit():
            nonlocal seg_no
            new_id = f"{t.id}#{seg_no}"
            traces.append(Trace(new_id, tuple(t.events[p] for p in segment)))
            origins[new_id] = (t.id, tuple(segment))
            seg_no += 1

        for i in range(len(t.events)):
            if segment and t.events[i].timestamp - t.events[i - 1].timestamp > max_time_gap:
                emit()
                segment = []
            segment.append(i)
        if segment:
            emit()
    return ExtractedLog(EventLog(traces), origins)


def extract_static(log: EventLog, max_time_gap: float) -> EventLog:
    return _extract_static(log, max_time_gap).log


# ---------------------------------------------------------------------------
# constrained support


class DynamicExtractionCache:
    """Extracted logs keyed by (pattern alphabet, start activities, constraint);
    per the extractor's structure the result depends on nothing else."""

    def __init__(self):
        self._store: dict = {}

    def get(self, log: EventLog, pattern: ProcessTree, constraint: GapConstraint) -> ExtractedLog:
        key = (
            log.content_key(),
            frozenset(pattern.activities()),
            frozenset(start_activities(pattern)),
            constraint.kind,
            constraint.max_gap,
        )
        if key not in self._store:
            self._store[key] = _extract_dynamic(log, pattern, constraint)
        return self._store[key]


_shared_cache = DynamicExtractionCache()


def _gate_factory(extracted: ExtractedLog, constraint: GapConstraint):
    """Sync gate over extracted traces, measured in original coordinates."""

    def factory(variant: tuple[str, ...], pmap: list[int], trace_id: str):
        src_id, positions = extracted.origins[trace_id]
        src_trace = next(t for t in extracted.log if t.id == trace_id)

        def gate(anchor: Optional[int], pos: int) -> bool:
            if anchor is None:
                return True
            j, k = pmap[anchor], pmap[pos]
            if constraint.kind is GapKind.EVENT:
                return positions[k] - positions[j] - 1 <= constraint.max_gap
            t1 = src_trace.events[j].timestamp
            t2 = src_trace.events[k].timestamp
            return t2 - t1 <= constraint.max_gap

        return gate

    return factory


def _direct_gate_factory(log: EventLog, constraint: GapConstraint):
    traces = {t.id: t for t in log}

    def factory(variant: tuple[str, ...], pmap: list[int], trace_id: str):
        trace = traces[trace_id]

        def gate(anchor: Optional[int], pos: int) -> bool:
            if anchor is None:
                return True
            j, k = pmap[anchor], pmap[pos]
            return _distance(constraint, trace, j, k) <= constraint.max_gap

        return gate

    return factory


def constrained_instances(
    log: EventLog,
    pattern: ProcessTree,
    constraint: GapConstraint,
    strategy: Strategy = Strategy.DYNAMIC,
    cache: Optional[DynamicExtractionCache] = None,
) -> InstanceMultiset:
    """Gap-satisfying instance multiset, strategy-independent by construction."""
    if strategy is Strategy.STATIC:
        if constraint.kind is not GapKind.TIME:
            raise ValueError("the static extractor applies to time gaps only")
        extracted = _extract_static(log, constraint.max_gap)
    elif strategy is Strategy.CACHED_DYNAMIC:
        extracted = (cache or _shared_cache).get(log, pattern, constraint)
    else:
        extracted = _extract_dynamic(log, pattern, constraint)
    gamma = extract_instances(pattern, extracted.log, _gate_factory(extracted, constraint))
    # map landmarks back to the source traces
    remapped: dict[Instance, int] = {}
    for inst, mult in gamma.instances:
        src_id, positions = extracted.origins[inst.trace_id]
        landmarks = tuple(positions[i - 1] + 1 for i in inst.landmarks)
        key = Instance(src_id, landmarks)
        remapped[key] = remapped.get(key, 0) + mult
    return InstanceMultiset(sorted(remapped.items(), key=lambda kv: (kv[0].trace_id, kv[0].landmarks)))


def constrained_support(
    log: EventLog,
    pattern: ProcessTree,
    constraint: GapConstraint,
    strategy: Strategy = Strategy.DYNAMIC,
    cache: Optional[DynamicExtractionCache] = None,
) -> int:
    return constrained_instances(log, pattern, constraint, strategy, cache).support()


def unextracted_constrained_instances(
    log: EventLog, pattern: ProcessTree, constraint: GapConstraint
) -> InstanceMultiset:
    """Gap-aware counting directly on the original log (no extraction); the
    reference the extraction strategies are checked against."""
    return extract_instances(pattern, log, _direct_gate_factory(log, constraint))
