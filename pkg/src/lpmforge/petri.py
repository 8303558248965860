"""Accepting Petri nets: markings, firing, tree translation, the instance-counting
transformation (backloop from final to initial marking), and the merged global
model used for pattern-set evaluation.

Markings are sorted tuples of place ids (multisets). Transition ids are stable
integers assigned in tree pre-order; alignment tie-breaking depends on them.
"""

from __future__ import annotations

from collections import Counter, deque
from dataclasses import dataclass, field
from typing import Iterable, Optional

from .tree import (
    ACTIVITY,
    AND,
    LOOP,
    SEQ,
    XOR,
    BudgetExceededError,
    ProcessTree,
    state_budget,
)

Marking = tuple[int, ...]  # sorted place ids, with repetition


class NetError(Exception):
    pass


@dataclass(frozen=True)
class Transition:
    id: int
    label: Optional[str]  # None = silent
    src_pattern: Optional[int] = None  # provenance index in a merged global model

    @property
    def silent(self) -> bool:
        return self.label is None


@dataclass
class AcceptingPetriNet:
    places: set[int]
    transitions: dict[int, Transition]
    pre: dict[int, Counter]  # transition id -> multiset of input places
    post: dict[int, Counter]  # transition id -> multiset of output places
    initial: Marking
    finals: tuple[Marking, ...]
    backloops: frozenset[int] = field(default_factory=frozenset)

    def labels(self) -> frozenset[str]:
        return frozenset(t.label for t in self.transitions.values() if t.label is not None)

    def sorted_transitions(self) -> list[Transition]:
        return [self.transitions[i] for i in sorted(self.transitions)]

    def to_json(self) -> dict:
        return {
            "places": sorted(self.places),
            "transitions": [
                {
                    "id": t.id,
                    "label": t.label,
                    **({"src_pattern": t.src_pattern} if t.src_pattern is not None else {}),
                }
                for t in self.sorted_transitions()
            ],
            "arcs": sorted(
                [[p, f"t{t}"] for t, pres in self.pre.items() for p in pres.elements()]
                + [[f"t{t}", p] for t, posts in self.post.items() for p in posts.elements()],
                key=str,
            ),
            "initial": list(self.initial),
            "finals": [list(m) for m in self.finals],
        }


def serialize_pnml(net: AcceptingPetriNet, net_id: str = "net1") -> bytes:
    """Write-only PNML export for interoperability with other tooling.

    Places carry the initial marking; silent transitions get no name element.
    Final markings have no place in basic PNML and are omitted.
    """
    import xml.etree.ElementTree as ET

    root = ET.Element("pnml")
    net_el = ET.SubElement(
        root, "net", id=net_id, type="http://www.pnml.org/version-2009/grammar/ptnet"
    )
    page = ET.SubElement(net_el, "page", id="page1")
    initial = Counter(net.initial)
    for p in sorted(net.places):
        place_el = ET.SubElement(page, "place", id=f"p{p}")
        if initial[p]:
            marking = ET.SubElement(place_el, "initialMarking")
            ET.SubElement(marking, "text").text = str(initial[p])
    for t in net.sorted_transitions():
        t_el = ET.SubElement(page, "transition", id=f"t{t.id}")
        if t.label is not None:
            name = ET.SubElement(t_el, "name")
            ET.SubElement(name, "text").text = t.label
    arc_no = 0
    for tid in sorted(net.transitions):
        for p, k in sorted(net.pre[tid].items()):
            for _ in range(k):
                ET.SubElement(page, "arc", id=f"a{arc_no}", source=f"p{p}", target=f"t{tid}")
                arc_no += 1
        for p, k in sorted(net.post[tid].items()):
            for _ in range(k):
                ET.SubElement(page, "arc", id=f"a{arc_no}", source=f"t{tid}", target=f"p{p}")
                arc_no += 1
    return ET.tostring(root, encoding="utf-8", xml_declaration=True)


def _as_marking(places: Iterable[int]) -> Marking:
    return tuple(sorted(places))


def enabled(net: AcceptingPetriNet, marking: Marking) -> list[Transition]:
    """Transitions whose full preset is covered by the marking, id-ascending."""
    have = Counter(marking)
    out = []
    for tid in sorted(net.transitions):
        if all(have[p] >= k for p, k in net.pre[tid].items()):
            out.append(net.transitions[tid])
    return out


def fire(net: AcceptingPetriNet, marking: Marking, tid: int) -> Marking:
    have = Counter(marking)
    missing = [p for p, k in net.pre[tid].items() if have[p] < k]
    if missing:
        raise NetError(f"transition t{tid} not enabled; missing input places {missing}")
    have.subtract(net.pre[tid])
    have.update(net.post[tid])
    return _as_marking(have.elements())


# ---------------------------------------------------------------------------
# tree -> net translation


class _Builder:
    def __init__(self):
        self.next_place = 0
        self.next_transition = 0
        self.transitions: dict[int, Transition] = {}
        self.pre: dict[int, Counter] = {}
        self.post: dict[int, Counter] = {}
        self.places: set[int] = set()

    def place(self) -> int:
        p = self.next_place
        self.next_place += 1
        self.places.add(p)
        return p

    def transition(self, label: Optional[str], ins: Iterable[int], outs: Iterable[int]) -> int:
        t = self.next_transition
        self.next_transition += 1
        self.transitions[t] = Transition(t, label)
        self.pre[t] = Counter(ins)
        self.post[t] = Counter(outs)
        return t


def to_petri_net(tree: ProcessTree, reduce_silent: bool = True) -> AcceptingPetriNet:
    """Translate a process tree to a sound workflow net.

    SEQ merges the middle place, XOR shares entry and exit places, AND uses a
    silent split and join, LOOP guards its entry/exit with silent transitions
    and adds a silent redo arc. A fusion pass then removes silent transitions
    that sit alone between two nodes, which keeps replay-based determinism
    faithful to hand-built nets (a single labeled transition can feed a
    parallel split directly).
    """
    b = _Builder()
    i = b.place()
    o = b.place()
    _emit(b, tree, i, o)
    net = AcceptingPetriNet(
        places=b.places,
        transitions=b.transitions,
        pre=b.pre,
        post=b.post,
        initial=(i,),
        finals=((o,),),
    )
    if reduce_silent:
        _fuse_silent(net)
    return net


def _emit(b: _Builder, t: ProcessTree, pin: int, pout: int) -> None:
    if t.kind == ACTIVITY:
        b.transition(t.label, [pin], [pout])
    elif t.kind == SEQ:
        mid = b.place()
        _emit(b, t.children[0], pin, mid)
        _emit(b, t.children[1], mid, pout)
    elif t.kind == XOR:
        _emit(b, t.children[0], pin, pout)
        _emit(b, t.children[1], pin, pout)
    elif t.kind == AND:
        i1, i2, o1, o2 = b.place(), b.place(), b.place(), b.place()
        b.transition(None, [pin], [i1, i2])
        _emit(b, t.children[0], i1, o1)
        _emit(b, t.children[1], i2, o2)
        b.transition(None, [o1, o2], [pout])
    elif t.kind == LOOP:
        body_in, body_out = b.place(), b.place()
        b.transition(None, [pin], [body_in])
        _emit(b, t.children[0], body_in, body_out)
        b.transition(None, [body_out], [body_in])  # redo
        b.transition(None, [body_out], [pout])  # exit
    else:  # pragma: no cover
        raise NetError(f"unknown tree kind {t.kind}")


def _fuse_silent(net: AcceptingPetriNet) -> None:
    """Fuse series silent transitions in place. Language preserving.

    Forward rule: silent t with a single input place p, where p has exactly one
    producer and t is p's only consumer, melts into the producer. Backward
    rule: silent t with a single output place p consumed by exactly one
    transition, where t is p's only producer, melts into the consumer.
    Initial/final places are never touched.
    """
    protected = set(net.initial)
    for m in net.finals:
        protected.update(m)

    def producers(p: int) -> list[int]:
        return [t for t, posts in net.post.items() if posts[p] > 0]

    def consumers(p: int) -> list[int]:
        return [t for t, pres in net.pre.items() if pres[p] > 0]

    changed = True
    while changed:
        changed = False
        for tid in sorted(net.transitions):
            t = net.transitions[tid]
            if not t.silent:
                continue
            ins = list(net.pre[tid].elements())
            outs = list(net.post[tid].elements())
            # forward fusion
            if len(ins) == 1 and ins[0] not in protected:
                p = ins[0]
                prods, cons = producers(p), consumers(p)
                if len(prods) == 1 and cons == [tid] and net.post[prods[0]][p] == 1:
                    src = prods[0]
                    del net.post[src][p]
                    net.post[src].update(net.post[tid])
                    net.post[src] = +net.post[src]
                    _drop_transition(net, tid)
                    net.places.discard(p)
                    changed = True
                    break
            # backward fusion
            if len(outs) == 1 and outs[0] not in protected:
                p = outs[0]
                prods, cons = producers(p), consumers(p)
                if len(cons) == 1 and cons[0] != tid and prods == [tid] and net.pre[cons[0]][p] == 1:
                    dst = cons[0]
                    del net.pre[dst][p]
                    net.pre[dst].update(net.pre[tid])
                    net.pre[dst] = +net.pre[dst]
                    _drop_transition(net, tid)
                    net.places.discard(p)
                    changed = True
                    break


def _drop_transition(net: AcceptingPetriNet, tid: int) -> None:
    del net.transitions[tid]
    del net.pre[tid]
    del net.post[tid]


# ---------------------------------------------------------------------------
# instance-counting transformation (backloop) and the merged global model


def to_instance_counter(net: AcceptingPetriNet) -> AcceptingPetriNet:
    """Add one silent backloop transition per final marking, from that marking
    back to the initial marking, and make the initial marking the only final
    one. The number of backloop firings in an alignment is the instance count.
    """
    finals = net.finals
    if len(finals) > 1:
        sets = [Counter(m) for m in finals]
        for i, a in enumerate(sets):
            for j, b in enumerate(sets):
                if i != j and all(b[p] >= k for p, k in a.items()):
                    raise NetError(
                        "net has a final marking contained in another; "
                        "backloop transformation is not safe here"
                    )
    transitions = dict(net.transitions)
    pre = {t: Counter(c) for t, c in net.pre.items()}
    post = {t: Counter(c) for t, c in net.post.items()}
    backloops = []
    next_id = max(transitions) + 1 if transitions else 0
    for m in finals:
        transitions[next_id] = Transition(next_id, None)
        pre[next_id] = Counter(m)
        post[next_id] = Counter(net.initial)
        backloops.append(next_id)
        next_id += 1
    return AcceptingPetriNet(
        places=set(net.places),
        transitions=transitions,
        pre=pre,
        post=post,
        initial=net.initial,
        finals=(net.initial,),
        backloops=frozenset(backloops),
    )


def merge_global(patterns: list[AcceptingPetriNet]) -> AcceptingPetriNet:
    """Merge tree-derived pattern nets into one global evaluation model.

    All initial places collapse into one place mi and all final places into mf;
    a single silent backloop leads from mf back to mi. The initial and only
    final marking is [mi], so the empty trace is accepted. Every transition is
    tagged with the index of its source pattern.
    """
    if not patterns:
        raise NetError("cannot merge an empty pattern list")
    for net in patterns:
        if len(net.initial) != 1 or len(net.finals) != 1 or len(net.finals[0]) != 1:
            raise NetError("merge_global needs single initial and final places per pattern")
    mi, mf = 0, 1
    places = {mi, mf}
    transitions: dict[int, Transition] = {}
    pre: dict[int, Counter] = {}
    post: dict[int, Counter] = {}
    next_place = 2
    next_t = 0
    for idx, net in enumerate(patterns):
        src_i, src_f = net.initial[0], net.finals[0][0]
        pmap = {}
        for p in sorted(net.places):
            if p == src_i:
                pmap[p] = mi
            elif p == src_f:
                pmap[p] = mf
            else:
                pmap[p] = next_place
                next_place += 1
                places.add(pmap[p])
        for tid in sorted(net.transitions):
            t = net.transitions[tid]
            transitions[next_t] = Transition(next_t, t.label, src_pattern=idx)
            pre[next_t] = Counter({pmap[p]: k for p, k in net.pre[tid].items()})
            post[next_t] = Counter({pmap[p]: k for p, k in net.post[tid].items()})
            next_t += 1
    transitions[next_t] = Transition(next_t, None)
    pre[next_t] = Counter([mf])
    post[next_t] = Counter([mi])
    return AcceptingPetriNet(
        places=places,
        transitions=transitions,
        pre=pre,
        post=post,
        initial=(mi,),
        finals=((mi,),),
        backloops=frozenset((next_t,)),
    )


# ---------------------------------------------------------------------------
# bounded net language via marking-graph search


def net_bounded_language(
    net: AcceptingPetriNet, n: int, budget: Optional[int] = None
) -> frozenset[tuple[str, ...]]:
    """All label sequences of length <= n reachable from the initial marking to
    a final marking. Breadth-first over (marking, emitted word) states with a
    visited-state budget."""
    cap = budget if budget is not None else state_budget()
    finals = set(net.finals)
    out: set[tuple[str, ...]] = set()
    seen: set[tuple[Marking, tuple[str, ...]]] = set()
    start = (net.initial, ())
    queue = deque([start])
    seen.add(start)
    while queue:
        marking, word = queue.popleft()
        if marking in finals:
            out.add(word)
        for t in enabled(net, marking):
            nxt_word = word if t.silent else word + (t.label,)
            if len(nxt_word) > n:
                continue
            state = (fire(net, marking, t.id), nxt_word)
            if state in seen:
                continue
            seen.add(state)
            if len(seen) > cap:
                raise BudgetExceededError(len(out), cap)
            queue.append(state)
    return frozenset(out)


def reachable_markings(net: AcceptingPetriNet, budget: Optional[int] = None) -> set[Marking]:
    cap = budget if budget is not None else state_budget()
    seen = {net.initial}
    queue = deque([net.initial])
    while queue:
        m = queue.popleft()
        for t in enabled(net, m):
            m2 = fire(net, m, t.id)
            if m2 not in seen:
                seen.add(m2)
                if len(seen) > cap:
                    raise BudgetExceededError(len(seen), cap)
                queue.append(m2)
    return seen


def shortest_visible_path_length(net: AcceptingPetriNet) -> int:
    """Minimal number of non-silent firings from the initial to a final
    marking (0/1-weighted Dijkstra). Used as the worst-case alignment cost."""
    finals = set(net.finals)
    # 0/1 BFS: silent arcs cost 0 (front), labeled arcs cost 1 (back)
    dq: deque = deque([(0, net.initial)])
    best: dict[Marking, int] = {net.initial: 0}
    while dq:
        d, m = dq.popleft()
        if best.get(m, 1 << 30) < d:
            continue
        if m in finals:
            return d
        for t in enabled(net, m):
            nd = d + (0 if t.silent else 1)
            m2 = fire(net, m, t.id)
            if nd < best.get(m2, 1 << 30):
                best[m2] = nd
                if t.silent:
                    dq.appendleft((nd, m2))
                else:
                    dq.append((nd, m2))
    raise NetError("no path from initial to final marking")
