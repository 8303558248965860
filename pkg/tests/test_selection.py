import random

import pytest

from lpmforge.eventlog import EventLog
from lpmforge.selection import (
    attribute_global,
    diversity_filter,
    score_set,
    select_alignment,
    select_greedy,
    select_greedy_fscore,
)
from lpmforge.tree import parse_tree

PATTERN_A = parse_tree("seq(A,and(B,seq(C,D)))")
PATTERN_B = parse_tree("seq(E,xor(seq(loop(seq(B,A)),F),F))")  # E (B A)* F
PATTERN_C = parse_tree("seq(D,B)")


def test_score_set_coverage_38_of_39(table_12_1a):
    s = score_set(table_12_1a, [PATTERN_A, PATTERN_B, PATTERN_C])
    assert s.total_events == 39
    assert s.coverage == pytest.approx(38 / 39, abs=1e-9)
    assert s.per_pattern_instances == (4, 5, 0)


def test_select_alignment_drops_uninstantiated(table_12_1a):
    kept = select_alignment(table_12_1a, [PATTERN_A, PATTERN_B, PATTERN_C])
    assert kept == [PATTERN_A, PATTERN_B]


def test_filtered_list_coverage_unchanged(table_12_1a):
    full = score_set(table_12_1a, [PATTERN_A, PATTERN_B, PATTERN_C])
    kept = select_alignment(table_12_1a, [PATTERN_A, PATTERN_B, PATTERN_C])
    assert score_set(table_12_1a, kept).coverage == pytest.approx(full.coverage)


def test_score_set_single_covering_pattern():
    log = EventLog.from_labels([list("ab")] * 3)
    s = score_set(log, [parse_tree("seq(a,b)")])
    assert s.coverage == 1.0
    assert s.fscore > 0


def test_score_set_empty_list():
    log = EventLog.from_labels([list("ab")])
    s = score_set(log, [])
    assert (s.coverage, s.non_redundancy, s.fscore) == (0.0, 0.0, 0.0)


def test_duplicate_pattern_lowers_non_redundancy():
    log = EventLog.from_labels([list("ab")] * 4 + [list("cd")] * 2)
    one = score_set(log, [parse_tree("seq(a,b)")])
    two = score_set(log, [parse_tree("seq(a,b)"), parse_tree("seq(a,b)")])
    assert two.non_redundancy < one.non_redundancy
    assert two.coverage == one.coverage


def test_zero_instance_pattern_never_raises_non_redundancy():
    rng = random.Random(131)
    for _ in range(10):
        rows = [
            [rng.choice("ab") for _ in range(rng.randint(1, 5))]
            for _ in range(rng.randint(1, 3))
        ]
        log = EventLog.from_labels(rows)
        base = [parse_tree("seq(a,b)")]
        extended = base + [parse_tree("seq(x,y)")]  # alphabet disjoint from log
        assert (
            score_set(log, extended).non_redundancy
            <= score_set(log, base).non_redundancy + 1e-12
        )


def test_attribution_deterministic(table_12_1a):
    pats = [PATTERN_A, PATTERN_B, PATTERN_C]
    a1, _, _ = attribute_global(table_12_1a, pats)
    a2, _, _ = attribute_global(table_12_1a, pats)
    assert a1.instances == a2.instances


def test_attribution_segments_dont_interleave(table_12_1a):
    attribution, _, _ = attribute_global(table_12_1a, [PATTERN_A, PATTERN_B, PATTERN_C])
    by_trace: dict[str, list[tuple[int, ...]]] = {}
    for tid, _idx, landmarks in attribution.instances:
        by_trace.setdefault(tid, []).append(landmarks)
    for spans in by_trace.values():
        for prev, cur in zip(spans, spans[1:]):
            assert prev[-1] < cur[0]


# -- greedy selectors -----------------------------------------------------------


def test_select_greedy_dominant_single_pattern():
    log = EventLog.from_labels([list("ab")] * 3)
    chosen = select_greedy(log, [parse_tree("seq(a,b)"), parse_tree("a")])
    assert [str(p) for p in chosen] == ["seq(a,b)"]


def test_select_greedy_disjoint_alphabets_ordered_by_explained():
    log = EventLog.from_labels([list("cd")] * 5 + [list("ab")] * 2)
    chosen = select_greedy(log, [parse_tree("seq(a,b)"), parse_tree("seq(c,d)")])
    assert [str(p) for p in chosen] == ["seq(c,d)", "seq(a,b)"]


def test_select_greedy_subsumed_duplicate_excluded():
    log = EventLog.from_labels([list("ab")] * 3)
    chosen = select_greedy(log, [parse_tree("seq(a,b)"), parse_tree("seq(a,b)")])
    assert len(chosen) == 1


def test_select_greedy_fscore_never_adds_duplicate():
    log = EventLog.from_labels([list("ab")] * 4 + [list("cd")] * 2)
    pool = [parse_tree("seq(a,b)"), parse_tree("seq(a,b)"), parse_tree("seq(c,d)")]
    chosen = select_greedy_fscore(log, pool)
    keys = [str(p) for p in chosen]
    assert keys.count("seq(a,b)") == 1


def test_select_greedy_fscore_monotone_improvement(table_12_1a):
    pats = [PATTERN_C, PATTERN_A, PATTERN_B]
    chosen = select_greedy_fscore(table_12_1a, pats)
    scores = [score_set(table_12_1a, chosen[: i + 1]).fscore for i in range(len(chosen))]
    assert scores == sorted(scores)
    assert score_set(table_12_1a, chosen).coverage >= 38 / 39 - 1e-9


def test_select_greedy_fscore_single_candidate():
    log = EventLog.from_labels([list("ab")] * 2)
    assert select_greedy_fscore(log, [parse_tree("seq(a,b)")]) == [parse_tree("seq(a,b)")]
    assert select_greedy_fscore(log, [parse_tree("seq(x,y)")]) == []


# -- diversity filter ------------------------------------------------------------


def test_diversity_threshold_zero_keeps_all():
    pats = [parse_tree("seq(a,b)"), parse_tree("xor(a,b)"), parse_tree("seq(a,c)")]
    assert diversity_filter(pats, 0.0) == pats


def test_diversity_identical_alphabet_dropped():
    pats = [parse_tree("seq(a,b)"), parse_tree("xor(a,b)")]
    assert diversity_filter(pats, 0.1) == [pats[0]]


def test_diversity_disjoint_alphabets_kept():
    pats = [parse_tree("seq(a,b)"), parse_tree("seq(c,d)")]
    assert diversity_filter(pats, 1.0) == pats


def test_diversity_empty_raises():
    with pytest.raises(ValueError):
        diversity_filter([], 0.5)
