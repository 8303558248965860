"""Event log data model, XES/CSV ingestion, projection, and directly-follows statistics.

An event log is a sequence of traces; each trace is an ordered sequence of
labeled events that optionally carry a timestamp (UTC epoch milliseconds) and
further scalar attributes.  The labeled view of a log is the multiset of label
sequences, which is what all mining operations work on.
"""

from __future__ import annotations

import csv
import io
import math
import re
import xml.etree.ElementTree as ET
from collections import Counter
from dataclasses import dataclass, field
from datetime import datetime, timezone
from typing import Iterable, Mapping, Optional, Sequence, Union

Scalar = Union[str, int, float, bool]

START = "↑"  # artificial start symbol, prepended for dpr rows
END = "↓"  # artificial end symbol, appended for dfr rows


class LogError(Exception):
    """Raised for malformed input documents or inconsistent log operations."""


class UndefinedDistributionError(LogError):
    """Requested a dfr/dpr row of an activity with zero occurrences, unsmoothed."""


@dataclass(frozen=True)
class Event:
    activity: str
    timestamp: Optional[int] = None  # UTC epoch milliseconds
    attributes: Mapping[str, Scalar] = field(default_factory=dict)

    def __post_init__(self):
        if not self.activity:
            raise LogError("event with empty activity label")


@dataclass(frozen=True)
class Trace:
    id: str
    events: tuple[Event, ...]

    @property
    def labels(self) -> tuple[str, ...]:
        return tuple(e.activity for e in self.events)

    def __len__(self) -> int:
        return len(self.events)


class EventLog:
    """Immutable multiset of traces. The alphabet is derived from the traces."""

    def __init__(self, traces: Iterable[Trace]):
        self._traces = tuple(traces)
        alphabet: set[str] = set()
        for t in self._traces:
            alphabet.update(t.labels)
        self._alphabet = frozenset(alphabet)

    @property
    def traces(self) -> tuple[Trace, ...]:
        return self._traces

    @property
    def alphabet(self) -> frozenset[str]:
        return self._alphabet

    def __len__(self) -> int:
        return len(self._traces)

    def __iter__(self):
        return iter(self._traces)

    def variant_counts(self) -> Counter:
        """The labeled-log view: multiset keyed by label sequence."""
        return Counter(t.labels for t in self._traces)

    def total_events(self) -> int:
        return sum(len(t) for t in self._traces)

    def activity_counts(self) -> Counter:
        c: Counter = Counter()
        for t in self._traces:
            c.update(t.labels)
        return c

    def fully_timestamped(self) -> bool:
        return all(e.timestamp is not None for t in self._traces for e in t.events)

    def content_key(self) -> str:
        """Stable digest of trace ids, labels, and timestamps; memoized."""
        if not hasattr(self, "_content_key"):
            import hashlib

            h = hashlib.sha256()
            for t in self._traces:
                h.update(t.id.encode())
                for e in t.events:
                    h.update(b"\x00" + e.activity.encode() + str(e.timestamp).encode())
                h.update(b"\x01")
            self._content_key = h.hexdigest()
        return self._content_key

    @staticmethod
    def from_labels(rows: Iterable[Sequence[str]], prefix: str = "t") -> "EventLog":
        """Convenience constructor from bare label sequences."""
        traces = [
            Trace(f"{prefix}{i}", tuple(Event(a) for a in row))
            for i, row in enumerate(rows, start=1)
        ]
        return EventLog(traces)


def project(log: EventLog, keep: Iterable[str]) -> EventLog:
    """Project every trace on the given activity set. Empty traces are retained."""
    keep = frozenset(keep)
    traces = [
        Trace(t.id, tuple(e for e in t.events if e.activity in keep)) for t in log
    ]
    return EventLog(traces)


# ---------------------------------------------------------------------------
# timestamp handling


_TZ_COLONLESS = re.compile(r"([+-]\d{2})(\d{2})$")


def parse_timestamp(text: str) -> int:
    """Parse an ISO-8601 timestamp to UTC epoch milliseconds.

    Python 3.10's fromisoformat rejects a trailing 'Z' and colon-less zone
    offsets, both of which appear in XES files in the wild.
    """
    s = text.strip()
    if s.endswith("Z") or s.endswith("z"):
        s = s[:-1] + "+00:00"
    else:
        s = _TZ_COLONLESS.sub(r"\1:\2", s)
    try:
        dt = datetime.fromisoformat(s)
    except ValueError as exc:
        raise LogError(f"unparseable timestamp {text!r}") from exc
    if dt.tzinfo is None:
        dt = dt.replace(tzinfo=timezone.utc)
    return int(dt.timestamp() * 1000)


def format_timestamp(ms: int) -> str:
    dt = datetime.fromtimestamp(ms / 1000.0, tz=timezone.utc)
    return dt.isoformat(timespec="milliseconds").replace("+00:00", "Z")


# ---------------------------------------------------------------------------
# XES ingestion


_XES_SCALARS = {"string", "int", "float", "boolean", "date", "id"}


def _local(tag: str) -> str:
    return tag.rsplit("}", 1)[-1]


def _xes_value(elem) -> Scalar:
    kind = _local(elem.tag)
    raw = elem.get("value", "")
    if kind == "int":
        return int(raw)
    if kind == "float":
        return float(raw)
    if kind == "boolean":
        return raw.strip().lower() == "true"
    return raw


def parse_xes(document: Union[bytes, str, io.IOBase]) -> EventLog:
    """Parse an XES document.

    Interprets concept:name, time:timestamp, and flat scalar attributes;
    classifiers, extensions, and nested attributes are ignored.
    """
    if isinstance(document, str):
        document = document.encode("utf-8")
    if isinstance(document, bytes):
        document = io.BytesIO(document)
    try:
        root = ET.parse(document).getroot()
    except ET.ParseError as exc:
        raise LogError(f"malformed XML: {exc}") from exc
    if _local(root.tag) != "log":
        raise LogError(f"expected <log> root element, got <{_local(root.tag)}>")

    traces = []
    for ti, trace_el in enumerate(e for e in root if _local(e.tag) == "trace"):
        trace_id = f"trace-{ti + 1}"
        events = []
        for child in trace_el:
            kind = _local(child.tag)
            if kind == "string" and child.get("key") == "concept:name":
                trace_id = child.get("value", trace_id)
            elif kind == "event":
                events.append(_parse_xes_event(child, trace_id, len(events)))
        traces.append(Trace(trace_id, tuple(events)))
    return EventLog(traces)


def _parse_xes_event(event_el, trace_id: str, index: int) -> Event:
    name: Optional[str] = None
    ts: Optional[int] = None
    attrs: dict[str, Scalar] = {}
    for a in event_el:
        kind = _local(a.tag)
        if kind not in _XES_SCALARS:
            continue
        key = a.get("key", "")
        if key == "concept:name":
            name = a.get("value", "")
        elif key == "time:timestamp":
            ts = parse_timestamp(a.get("value", ""))
        else:
            attrs[key] = _xes_value(a)
    if not name:
        raise LogError(
            f"event without concept:name (trace {trace_id!r}, event index {index})"
        )
    return Event(name, ts, attrs)


def serialize_xes(log: EventLog) -> bytes:
    root = ET.Element("log")
    for t in log:
        trace_el = ET.SubElement(root, "trace")
        ET.SubElement(trace_el, "string", key="concept:name", value=t.id)
        for e in t.events:
            ev = ET.SubElement(trace_el, "event")
            ET.SubElement(ev, "string", key="concept:name", value=e.activity)
            if e.timestamp is not None:
                ET.SubElement(
                    ev, "date", key="time:timestamp", value=format_timestamp(e.timestamp)
                )
            for k, v in e.attributes.items():
                ET.SubElement(ev, "string", key=k, value=str(v))
    return ET.tostring(root, encoding="utf-8", xml_declaration=True)


# ---------------------------------------------------------------------------
# CSV ingestion


@dataclass(frozen=True)
class CsvMapping:
    case: str
    activity: str
    timestamp: Optional[str] = None


def parse_csv(document: Union[bytes, str, io.IOBase], mapping: CsvMapping) -> EventLog:
    """Parse a headered CSV into a log: rows grouped by case id, ordered by
    timestamp with a stable sort (file order preserved on ties). Unmapped
    columns become event attributes."""
    if isinstance(document, bytes):
        document = document.decode("utf-8")
    if isinstance(document, str):
        document = io.StringIO(document)
    reader = csv.DictReader(document)
    header = reader.fieldnames or []
    for col in (mapping.case, mapping.activity):
        if col not in header:
            raise LogError(f"mapped column {col!r} not in header {header}")
    if mapping.timestamp is not None and mapping.timestamp not in header:
        raise LogError(f"mapped column {mapping.timestamp!r} not in header {header}")

    extra_cols = [
        c
        for c in header
        if c not in (mapping.case, mapping.activity, mapping.timestamp)
    ]
    by_case: dict[str, list[Event]] = {}
    order: list[str] = []
    for rownum, row in enumerate(reader, start=2):  # header is line 1
        case = row[mapping.case]
        activity = row[mapping.activity]
        if not activity:
            raise LogError(f"row {rownum}: empty activity")
        ts = None
        if mapping.timestamp is not None and row[mapping.timestamp]:
            try:
                ts = parse_timestamp(row[mapping.timestamp])
            except LogError as exc:
                raise LogError(f"row {rownum}: {exc}") from exc
        attrs = {c: row[c] for c in extra_cols if row.get(c) not in (None, "")}
        if case not in by_case:
            by_case[case] = []
            order.append(case)
        by_case[case].append(Event(activity, ts, attrs))

    traces = []
    for case in order:
        events = by_case[case]
        if all(e.timestamp is not None for e in events):
            events = sorted(events, key=lambda e: e.timestamp)  # stable
        traces.append(Trace(case, tuple(events)))
    return EventLog(traces)


def serialize_csv(log: EventLog, mapping: CsvMapping = CsvMapping("case", "activity", "timestamp")) -> str:
    extra: list[str] = []
    for t in log:
        for e in t.events:
            for k in e.attributes:
                if k not in extra:
                    extra.append(k)
    out = io.StringIO()
    cols = [mapping.case, mapping.activity]
    if mapping.timestamp:
        cols.append(mapping.timestamp)
    writer = csv.writer(out)
    writer.writerow(cols + extra)
    for t in log:
        for e in t.events:
            row = [t.id, e.activity]
            if mapping.timestamp:
                row.append(format_timestamp(e.timestamp) if e.timestamp is not None else "")
            row.extend(str(e.attributes.get(k, "")) for k in extra)
            writer.writerow(row)
    return out.getvalue()


# ---------------------------------------------------------------------------
# directly-follows / directly-precedes statistics


class FollowsStats:
    """dfr/dpr ratio rows with artificial start/end symbols, per activity.

    ``dfr(a, b)`` is the fraction of a-events directly followed by b, where a
    trace-final a is followed by the artificial end symbol; ``dpr`` is the
    symmetric predecessor version with the artificial start symbol.
    """

    def __init__(self, log: EventLog, smoothing: Optional[float] = None):
        if smoothing is not None and smoothing < 0:
            raise ValueError("smoothing alpha must be >= 0")
        self.alpha = smoothing
        self.activities = sorted(log.alphabet)
        self.index = {a: i + 1 for i, a in enumerate(self.activities)}
        self.counts: Counter = log.activity_counts()
        self.follow_pairs: Counter = Counter()  # (a, b) with b in alphabet | END
        self.precede_pairs: Counter = Counter()  # (a, b) with b in alphabet | START
        for t in log:
            labels = t.labels
            for i, a in enumerate(labels):
                nxt = labels[i + 1] if i + 1 < len(labels) else END
                prv = labels[i - 1] if i > 0 else START
                self.follow_pairs[(a, nxt)] += 1
                self.precede_pairs[(a, prv)] += 1

    def _row(self, a: str, pairs: Counter, extra: str) -> dict[str, float]:
        if a not in self.index:
            raise UndefinedDistributionError(f"unknown activity {a!r}")
        n = self.counts[a]
        cols = self.activities + [extra]
        if self.alpha is None:
            if n == 0:
                raise UndefinedDistributionError(
                    f"activity {a!r} has zero occurrences; row undefined without smoothing"
                )
            return {b: pairs[(a, b)] / n for b in cols}
        denom = self.alpha * (len(self.activities) + 1) + n
        return {b: (self.alpha + pairs[(a, b)]) / denom for b in cols}

    def dfr_row(self, a: str) -> dict[str, float]:
        return self._row(a, self.follow_pairs, END)

    def dpr_row(self, a: str) -> dict[str, float]:
        return self._row(a, self.precede_pairs, START)

    def dfr(self, a: str, b: str) -> float:
        return self.dfr_row(a).get(b, 0.0)

    def dpr(self, a: str, b: str) -> float:
        return self.dpr_row(a).get(b, 0.0)


def compute_follows_stats(log: EventLog, smoothing: Optional[float] = None) -> FollowsStats:
    return FollowsStats(log, smoothing)


def row_entropy(row: Mapping[str, float]) -> float:
    """Shannon entropy (base 2) of a categorical row; 0*log(0) = 0."""
    h = 0.0
    for p in row.values():
        if p > 0.0:
            h -= p * math.log2(p)
    return h
