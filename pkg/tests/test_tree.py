import random

import pytest

from lpmforge.tree import (
    BudgetExceededError,
    TreeParseError,
    activity,
    and_,
    bounded_language,
    loop,
    parse_tree,
    seq,
    serialize_tree,
    start_activities,
    xor,
    ProcessTree,
)
from oracles import random_tree


def test_parse_basic():
    t = parse_tree("seq(xor(a,d),and(b,c))")
    assert t == seq(xor(activity("a"), activity("d")), and_(activity("b"), activity("c")))


def test_parse_loop():
    assert parse_tree("loop(a)") == loop(activity("a"))


def test_parse_arity_error():
    with pytest.raises(TreeParseError):
        parse_tree("and(a)")
    with pytest.raises(TreeParseError):
        parse_tree("loop(a,b)")
    with pytest.raises(TreeParseError):
        parse_tree("seq(a,b")


def test_parse_quoted_names():
    t = parse_tree("seq('open door','pay, now')")
    assert sorted(t.activities()) == ["open door", "pay, now"]
    assert parse_tree(serialize_tree(t)) == t


def test_serialize_round_trip_random():
    rng = random.Random(11)
    for _ in range(60):
        t = random_tree(rng, "abcde", 4)
        assert parse_tree(serialize_tree(t)) == t


def test_json_round_trip():
    t = parse_tree("seq(xor(a,d),loop(b))")
    assert ProcessTree.from_json(t.to_json()) == t


def test_bounded_language_fig_2_2():
    t = parse_tree("seq(xor(a,d),and(b,c))")
    assert bounded_language(t, 3) == frozenset(
        {("a", "b", "c"), ("a", "c", "b"), ("d", "b", "c"), ("d", "c", "b")}
    )


def test_bounded_language_loop_one_or_more():
    assert bounded_language(parse_tree("loop(a)"), 3) == frozenset(
        {("a",), ("a", "a"), ("a", "a", "a")}
    )


def test_bounded_language_nested_loop():
    # derived by unrolling the one-or-more semantics by hand
    t = parse_tree("seq(a,loop(seq(b,a)))")
    assert bounded_language(t, 5) == frozenset(
        {("a", "b", "a"), ("a", "b", "a", "b", "a")}
    )


def test_bounded_language_monotone_in_n():
    rng = random.Random(5)
    for _ in range(40):
        t = random_tree(rng, "abc", 3)
        for n in range(0, 5):
            assert bounded_language(t, n) <= bounded_language(t, n + 1)


def test_bounded_language_uses_only_tree_activities():
    rng = random.Random(6)
    for _ in range(40):
        t = random_tree(rng, "abcd", 4)
        sigma = t.activities()
        for word in bounded_language(t, 5):
            assert set(word) <= sigma


def test_budget_exceeded():
    t = parse_tree("and(and(a,b),and(c,d))")
    with pytest.raises(BudgetExceededError):
        bounded_language(t, 8, budget=3)


def test_start_activities_paper_example():
    assert start_activities(parse_tree("seq(xor(a,d),and(b,c))")) == {"a", "d"}


def test_start_activities_simple():
    assert start_activities(parse_tree("a")) == {"a"}
    assert start_activities(parse_tree("loop(seq(b,a))")) == {"b"}


def test_start_activities_equal_first_symbols_of_language():
    rng = random.Random(9)
    for _ in range(50):
        t = random_tree(rng, "abc", 3)
        lang = bounded_language(t, 6)
        firsts = {w[0] for w in lang if w}
        if firsts:  # language may be empty below the bound only for long loops
            assert start_activities(t) == firsts
