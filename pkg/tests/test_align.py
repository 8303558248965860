import random

import pytest

from lpmforge.align import (
    INSTANCE_COUNTING,
    STANDARD,
    align,
    extract_instances,
    replay_profile,
)
from lpmforge.eventlog import EventLog
from lpmforge.petri import enabled, fire, to_instance_counter, to_petri_net
from lpmforge.tree import bounded_language, parse_tree
from oracles import best_instance_sets, random_tree, standard_optimum
from test_petri import fig_2_1_net


def test_fitting_trace_zero_deviation():
    net = to_petri_net(parse_tree("seq(a,and(b,c))"))
    a = align(net, ("a", "c", "b"), STANDARD)
    assert a.deviation_cost == 0
    assert a.sync_count == 3


def test_standard_alignment_fig_2_4_cost_components():
    """The trace has seven events, two e's but only one full round's worth of
    deviations is avoidable; the brute-force optimum over enumerated model
    words pins the deviation cost, and the two-tier order then minimizes
    silent firings among those optima."""
    net = fig_2_1_net()
    trace = tuple("aadefbe")
    words = net_words = set()
    from lpmforge.petri import net_bounded_language

    net_words = net_bounded_language(net, 2 * len(trace) + 5)
    expected = standard_optimum(trace, net_words)
    a = align(net, trace, STANDARD)
    counts = a.counts(net)
    assert counts["log"] + counts["model_labeled"] == a.deviation_cost == expected == 4
    assert counts["sync"] + counts["log"] == len(trace)
    # two-tier: among deviation-optimal alignments the single-round one wins
    assert a.silent_moves == 1


def test_instance_counting_example_8_4_1():
    net = to_instance_counter(to_petri_net(parse_tree("seq(a,and(b,c))")))
    a = align(net, tuple("aacbaacbbc"), INSTANCE_COUNTING)
    counts = a.counts(net)
    assert counts == {"sync": 6, "log": 4, "model_labeled": 0, "model_silent": 4}
    backloop_firings = sum(1 for m in a.moves if m.is_model and m.transition in net.backloops)
    assert backloop_firings == 2


def test_instance_counting_fitting_concatenation_fires_backloop_twice():
    net = to_instance_counter(to_petri_net(parse_tree("seq(a,and(b,c))")))
    a = align(net, tuple("abcacb"), INSTANCE_COUNTING)
    assert a.deviation_cost == 0
    backloops = sum(1 for m in a.moves if m.is_model and m.transition in net.backloops)
    assert backloops == 2


def test_alignment_deterministic():
    net = to_instance_counter(to_petri_net(parse_tree("seq(a,xor(b,c))")))
    t = tuple("abacbc")
    assert align(net, t, INSTANCE_COUNTING).moves == align(net, t, INSTANCE_COUNTING).moves


def test_all_log_moves_when_pattern_absent():
    net = to_instance_counter(to_petri_net(parse_tree("seq(a,b)")))
    a = align(net, ("x", "y"), INSTANCE_COUNTING)
    assert a.sync_count == 0
    assert a.log_move_count == 2


# -- instance extraction ------------------------------------------------------


def test_extract_instances_paper_8_4_1():
    log = EventLog.from_labels([list("aacbaacbbc")])
    gamma = extract_instances(parse_tree("seq(a,and(b,c))"), log)
    assert [inst.landmarks for inst, _ in gamma.instances] == [(1, 3, 4), (5, 7, 8)]
    assert gamma.support() == 2


def test_extract_instances_multiset_weights():
    log = EventLog.from_labels([list("ab")] * 10 + [list("aababb")] * 2)
    gamma = extract_instances(parse_tree("seq(a,b)"), log)
    assert gamma.support() == 14
    assert gamma.total_events() == 28
    # per trace: the ten short traces give one instance each, the two long
    # ones give two non-overlapping instances each
    per_trace = {}
    for inst, mult in gamma.instances:
        per_trace[inst.trace_id] = per_trace.get(inst.trace_id, 0) + mult
    assert sorted(per_trace.values()).count(2) == 2


def test_extract_instances_empty_projection():
    log = EventLog.from_labels([list("dd")])
    gamma = extract_instances(parse_tree("seq(a,xor(b,c))"), log)
    assert gamma.support() == 0


def test_extract_instances_landmarks_unprojected_positions():
    log = EventLog.from_labels([list("xaxbx")])
    gamma = extract_instances(parse_tree("seq(a,b)"), log)
    assert [inst.landmarks for inst, _ in gamma.instances] == [(2, 4)]


def test_loop_counts_one_instance_per_run():
    log = EventLog.from_labels([["a"], ["a"], ["a"]])
    assert extract_instances(parse_tree("loop(a)"), log).support() == 3
    assert extract_instances(parse_tree("seq(a,a)"), log).support() == 0
    run = EventLog.from_labels([["a", "a", "a"]])
    gamma = extract_instances(parse_tree("loop(a)"), run)
    assert [inst.landmarks for inst, _ in gamma.instances] == [(1, 2, 3)]


def test_gamma_matches_brute_force_maximal_then_minimal():
    rng = random.Random(41)
    for _ in range(60):
        tree = random_tree(rng, "abc", 3)
        trace = tuple(rng.choice("abc") for _ in range(rng.randint(1, 8)))
        log = EventLog.from_labels([list(trace)])
        gamma = extract_instances(tree, log)
        words = bounded_language(tree, len(trace))
        events, count = best_instance_sets(trace, words)
        assert gamma.total_events() == events, (tree, trace)
        assert gamma.support() == count, (tree, trace)


def test_instances_within_trace_have_disjoint_spans():
    rng = random.Random(43)
    for _ in range(40):
        tree = random_tree(rng, "ab", 3)
        trace = tuple(rng.choice("ab") for _ in range(rng.randint(1, 8)))
        gamma = extract_instances(tree, EventLog.from_labels([list(trace)]))
        spans = sorted(inst.span() for inst, _ in gamma.instances)
        for (s1, e1), (s2, e2) in zip(spans, spans[1:]):
            assert e1 < s2


# -- replay profile -----------------------------------------------------------


def test_replay_profile_table_8_2():
    log = EventLog.from_labels([list("aacbaacbbc")])
    prof = replay_profile(parse_tree("seq(a,and(b,c))"), log)
    assert prof.enabled_counts == (1, 2, 1, 1, 1, 1, 2, 1, 1, 1)
    assert prof.firings == 10 and prof.enabled_total == 12
    assert prof.determinism == pytest.approx(10 / 12)


def test_replay_sequential_pattern_fully_deterministic():
    log = EventLog.from_labels([list("ab")] * 3)
    prof = replay_profile(parse_tree("seq(a,b)"), log)
    assert prof.determinism == 1.0


def test_replay_xor_choice():
    """xor(a,b) compiles to two place-sharing transitions plus the backloop;
    replaying one a-event sees two enabled at the choice, one at the loop-back."""
    net = to_instance_counter(to_petri_net(parse_tree("xor(a,b)")))
    assert len(net.transitions) == 3
    prof = replay_profile(parse_tree("xor(a,b)"), EventLog.from_labels([["a"]]))
    assert prof.enabled_counts == (2, 1)
    assert prof.determinism == pytest.approx(2 / 3)


def test_replay_empty_log_is_vacuously_deterministic():
    prof = replay_profile(parse_tree("seq(a,b)"), EventLog.from_labels([["x"]]))
    assert prof.firings == 0
    assert prof.determinism == 1.0
