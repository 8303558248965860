"""Process trees: pattern representation with SEQ / XOR / AND / LOOP operators.

Semantics: SEQ concatenates the children's languages, XOR takes their union,
AND shuffles them, and LOOP is one-or-more repetitions of its single child.
Bounded language enumeration follows these rules directly; the Petri net
route lives in petri.py and is checked against this one in the tests.
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass
from typing import Iterator, Optional

SEQ = "seq"
XOR = "xor"
AND = "and"
LOOP = "loop"
ACTIVITY = "activity"

OPERATORS = (SEQ, XOR, AND, LOOP)

DEFAULT_STATE_BUDGET = 200_000


class TreeParseError(ValueError):
    def __init__(self, message: str, position: int):
        super().__init__(f"{message} (at position {position})")
        self.position = position


class BudgetExceededError(RuntimeError):
    def __init__(self, partial_size: int, budget: int):
        super().__init__(
            f"language enumeration exceeded budget of {budget} states "
            f"({partial_size} sequences found so far)"
        )
        self.partial_size = partial_size
        self.budget = budget


def state_budget() -> int:
    return int(os.environ.get("LPMFORGE_BUDGET", DEFAULT_STATE_BUDGET))


@dataclass(frozen=True)
class ProcessTree:
    kind: str
    label: Optional[str] = None
    children: tuple["ProcessTree", ...] = ()

    def __post_init__(self):
        if self.kind == ACTIVITY:
            if not self.label:
                raise ValueError("activity node needs a label")
            if self.children:
                raise ValueError("activity node takes no children")
        elif self.kind == LOOP:
            if len(self.children) != 1:
                raise ValueError("loop takes exactly one child")
        elif self.kind in (SEQ, XOR, AND):
            if len(self.children) != 2:
                raise ValueError(f"{self.kind} takes exactly two children")
        else:
            raise ValueError(f"unknown node kind {self.kind!r}")

    # -- structure ---------------------------------------------------------

    def activities(self) -> frozenset[str]:
        if self.kind == ACTIVITY:
            return frozenset((self.label,))
        out: set[str] = set()
        for c in self.children:
            out |= c.activities()
        return frozenset(out)

    def leaf_count(self) -> int:
        if self.kind == ACTIVITY:
            return 1
        return sum(c.leaf_count() for c in self.children)

    def __str__(self) -> str:
        return serialize_tree(self)

    def to_json(self) -> dict:
        if self.kind == ACTIVITY:
            return {"op": ACTIVITY, "label": self.label}
        return {"op": self.kind, "children": [c.to_json() for c in self.children]}

    @staticmethod
    def from_json(obj: dict) -> "ProcessTree":
        if obj["op"] == ACTIVITY:
            return activity(obj["label"])
        return ProcessTree(obj["op"], None, tuple(ProcessTree.from_json(c) for c in obj["children"]))


def activity(name: str) -> ProcessTree:
    return ProcessTree(ACTIVITY, name)


def seq(a: ProcessTree, b: ProcessTree) -> ProcessTree:
    return ProcessTree(SEQ, None, (a, b))


def xor(a: ProcessTree, b: ProcessTree) -> ProcessTree:
    return ProcessTree(XOR, None, (a, b))


def and_(a: ProcessTree, b: ProcessTree) -> ProcessTree:
    return ProcessTree(AND, None, (a, b))


def loop(a: ProcessTree) -> ProcessTree:
    return ProcessTree(LOOP, None, (a,))


# ---------------------------------------------------------------------------
# textual grammar:  seq(T,T) | xor(T,T) | and(T,T) | loop(T) | name | 'name'


_DELIMS = set("(),' \t\n")


def serialize_tree(tree: ProcessTree) -> str:
    if tree.kind == ACTIVITY:
        name = tree.label
        if any(ch in _DELIMS for ch in name):
            return "'" + name.replace("'", "\\'") + "'"
        return name
    args = ",".join(serialize_tree(c) for c in tree.children)
    return f"{tree.kind}({args})"


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.pos = 0

    def error(self, message: str):
        raise TreeParseError(message, self.pos)

    def skip_ws(self):
        while self.pos < len(self.text) and self.text[self.pos] in " \t\n":
            self.pos += 1

    def parse(self) -> ProcessTree:
        node = self.parse_node()
        self.skip_ws()
        if self.pos != len(self.text):
            self.error("trailing input")
        return node

    def parse_node(self) -> ProcessTree:
        self.skip_ws()
        if self.pos >= len(self.text):
            self.error("unexpected end of input")
        if self.text[self.pos] == "'":
            return activity(self.parse_quoted())
        name = self.parse_bare()
        self.skip_ws()
        if self.pos < len(self.text) and self.text[self.pos] == "(" and name in OPERATORS:
            return self.parse_operator(name)
        if not name:
            self.error("expected activity or operator")
        return activity(name)

    def parse_operator(self, op: str) -> ProcessTree:
        self.pos += 1  # consume '('
        args = [self.parse_node()]
        self.skip_ws()
        while self.pos < len(self.text) and self.text[self.pos] == ",":
            self.pos += 1
            args.append(self.parse_node())
            self.skip_ws()
        if self.pos >= len(self.text) or self.text[self.pos] != ")":
            self.error("expected ')'")
        self.pos += 1
        want = 1 if op == LOOP else 2
        if len(args) != want:
            self.error(f"{op} takes {want} argument(s), got {len(args)}")
        return ProcessTree(op, None, tuple(args))

    def parse_quoted(self) -> str:
        self.pos += 1
        out = []
        while self.pos < len(self.text):
            ch = self.text[self.pos]
            if ch == "\\" and self.pos + 1 < len(self.text):
                out.append(self.text[self.pos + 1])
                self.pos += 2
                continue
            if ch == "'":
                self.pos += 1
                return "".join(out)
            out.append(ch)
            self.pos += 1
        self.error("unterminated quoted name")

    def parse_bare(self) -> str:
        start = self.pos
        while self.pos < len(self.text) and self.text[self.pos] not in _DELIMS:
            self.pos += 1
        return self.text[start:self.pos]


def parse_tree(text: str) -> ProcessTree:
    return _Parser(text).parse()


# ---------------------------------------------------------------------------
# bounded language per the recursive semantics


def bounded_language(tree: ProcessTree, n: int, budget: Optional[int] = None) -> frozenset[tuple[str, ...]]:
    """All language sequences of length <= n.

    Enumeration work is capped: the running count of produced sequences across
    subcalls may not exceed the budget (shuffles grow combinatorially).
    """
    if n < 0:
        raise ValueError("n must be >= 0")
    cap = budget if budget is not None else state_budget()
    counter = [0]

    def charge(k: int, have: int):
        counter[0] += k
        if counter[0] > cap:
            raise BudgetExceededError(have, cap)

    def lang(t: ProcessTree) -> frozenset[tuple[str, ...]]:
        if t.kind == ACTIVITY:
            return frozenset(((t.label,),)) if n >= 1 else frozenset()
        if t.kind == SEQ:
            left, right = lang(t.children[0]), lang(t.children[1])
            out = set()
            for s1 in left:
                for s2 in right:
                    if len(s1) + len(s2) <= n:
                        out.add(s1 + s2)
            charge(len(left) * len(right), len(out))
            return frozenset(out)
        if t.kind == XOR:
            return lang(t.children[0]) | lang(t.children[1])
        if t.kind == AND:
            left, right = lang(t.children[0]), lang(t.children[1])
            out = set()
            for s1 in left:
                for s2 in right:
                    if len(s1) + len(s2) <= n:
                        for sh in _shuffles(s1, s2):
                            out.add(sh)
                            charge(1, len(out))
            return frozenset(out)
        # LOOP: one-or-more concatenations of the child language
        base = lang(t.children[0])
        out = set(base)
        frontier = set(base)
        while frontier:
            nxt = set()
            for s1 in frontier:
                for s2 in base:
                    cat = s1 + s2
                    if len(cat) <= n and cat not in out:
                        out.add(cat)
                        nxt.add(cat)
                        charge(1, len(out))
            frontier = nxt
        return frozenset(out)

    return frozenset(s for s in lang(tree) if len(s) <= n)


def _shuffles(a: tuple[str, ...], b: tuple[str, ...]) -> Iterator[tuple[str, ...]]:
    if not a:
        yield b
        return
    if not b:
        yield a
        return
    for rest in _shuffles(a[1:], b):
        yield (a[0],) + rest
    for rest in _shuffles(a, b[1:]):
        yield (b[0],) + rest


def start_activities(tree: ProcessTree) -> frozenset[str]:
    """First symbols of the tree's language, computed structurally."""
    if tree.kind == ACTIVITY:
        return frozenset((tree.label,))
    if tree.kind == SEQ:
        return start_activities(tree.children[0])
    if tree.kind in (XOR, AND):
        return start_activities(tree.children[0]) | start_activities(tree.children[1])
    return start_activities(tree.children[0])


def tree_to_json_str(tree: ProcessTree) -> str:
    return json.dumps(tree.to_json(), sort_keys=True)
