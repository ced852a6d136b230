import functools
import itertools

import pytest

from src.model import (Event, EventTuple, ProblemSpec, ProblemSpecError, binom,
                       compare_events, compare_tuples, enumerate_events, event_count,
                       make_tuple, rank_rsubset, tr_ranks, tuple_type_of, unrank_rsubset)


@pytest.mark.parametrize("n,k,expected", [(5, 2, 10), (3, 5, 0), (0, 0, 1), (4, -1, 0), (40, 20, 137846528820)])
def test_binom(n, k, expected):
    assert binom(n, k) == expected


@pytest.mark.parametrize("t,r,p", [
    (0, 2, ()),
    (2, 0, (3, 3)),
    (2, 2, (3,)),
    (2, 2, (4, 3)),
    (2, 3, (2, 4)),
])
def test_problem_spec_rejects_invalid(t, r, p):
    with pytest.raises(ProblemSpecError):
        ProblemSpec(t, r, p)


def test_problem_spec_label(r33):
    assert r33.label() == "R(3,3;2)"
    assert r33.size_of(2) == 3


def test_compare_events():
    a = Event(1, (1, 2, 3))
    assert compare_events(a, Event(1, (1, 2, 4))) == -1
    assert compare_events(Event(1, (9, 10, 11)), Event(2, (1, 2, 3))) == -1
    assert compare_events(a, Event(1, (1, 2, 3))) == 0
    assert compare_events(Event(2, (1, 2, 3)), a) == 1


def test_compare_tuples():
    a, b, c = Event(1, (1, 2, 3)), Event(1, (1, 2, 4)), Event(2, (1, 2, 3))
    assert compare_tuples(EventTuple((c,)), EventTuple((a, b))) == -1
    assert compare_tuples(EventTuple((a, b)), EventTuple((a, c))) == -1
    assert compare_tuples(EventTuple((a, b)), EventTuple((a, b))) == 0
    assert compare_tuples(EventTuple((a, c)), EventTuple((a, b))) == 1


def test_event_tuple_must_be_strictly_increasing():
    a, b = Event(1, (1, 2, 3)), Event(2, (1, 2, 3))
    with pytest.raises(ProblemSpecError):
        EventTuple((b, a))
    with pytest.raises(ProblemSpecError):
        EventTuple((a, a))
    assert make_tuple([b, a]).events == (a, b)


def test_enumerate_events(r33):
    events = enumerate_events(r33, 4)
    assert len(events) == 8 == event_count(r33, 4)
    assert events[0] == Event(1, (1, 2, 3))
    assert events[-1] == Event(2, (2, 3, 4))
    assert all(compare_events(a, b) < 0 for a, b in zip(events, events[1:]))
    assert enumerate_events(ProblemSpec(1, 2, (3,)), 2) == []
    assert len(enumerate_events(ProblemSpec(3, 1, (2, 2, 2)), 3)) == 9


def test_enumerate_events_rejects_negative_n(r33):
    with pytest.raises(ProblemSpecError):
        enumerate_events(r33, -1)


def test_rank_examples():
    assert rank_rsubset((1, 2), 4, 2) == 0
    assert unrank_rsubset(5, 4, 2) == (3, 4)


@pytest.mark.parametrize("n,r", list(itertools.product(range(1, 9), range(1, 5))))
def test_rank_follows_lexicographic_order(n, r):
    combos = list(itertools.combinations(range(1, n + 1), r))
    assert len(combos) == binom(n, r)
    for idx, combo in enumerate(combos):
        assert rank_rsubset(combo, n, r) == idx
        assert unrank_rsubset(idx, n, r) == combo


def test_rank_rejects_bad_input():
    with pytest.raises(ValueError):
        rank_rsubset((2, 1), 4, 2)
    with pytest.raises(ValueError):
        rank_rsubset((1, 5), 4, 2)
    with pytest.raises(ValueError):
        unrank_rsubset(6, 4, 2)


def test_tr_ranks():
    assert tr_ranks((1, 2, 3), 4, 2) == [0, 1, 3]
    assert tr_ranks((1, 2), 4, 3) == []


def test_tuple_type_of():
    tup = make_tuple([Event(1, (1, 2, 3)), Event(1, (1, 2, 4)), Event(2, (3, 4, 5))])
    assert tuple_type_of(tup, 2) == (2, 1)
    assert tuple_type_of(tup, 3) == (2, 1, 0)


def test_binom_pascal_identity():
    for n in range(1, 31):
        for k in range(-1, n + 2):
            assert binom(n, k) == binom(n - 1, k - 1) + binom(n - 1, k)


def assert_strict_total_order(items, compare):
    """排序后任意两项的比较结果都与位置一致"""
    ordered = sorted(items, key=functools.cmp_to_key(compare))
    for i, a in enumerate(ordered):
        assert compare(a, a) == 0
        for b in ordered[i + 1:]:
            assert compare(a, b) == -1
            assert compare(b, a) == 1
    return ordered


@pytest.mark.parametrize("spec", [ProblemSpec(2, 2, (2, 3)), ProblemSpec(3, 1, (1, 2, 2))])
@pytest.mark.parametrize("n", range(1, 6))
def test_compare_events_is_a_strict_total_order(spec, n):
    events = enumerate_events(spec, n)
    shuffled = list(reversed(events))
    assert assert_strict_total_order(shuffled, compare_events) == events


@pytest.mark.parametrize("n", range(1, 6))
def test_compare_tuples_is_a_strict_total_order(n):
    events = enumerate_events(ProblemSpec(2, 2, (2, 3)), n)
    max_k = 3 if n <= 4 else 2
    tuples = [EventTuple(combo) for k in range(1, max_k + 1)
              for combo in itertools.combinations(events, k)]
    ordered = assert_strict_total_order(tuples, compare_tuples)
    assert len(ordered) == len(set(ordered))
    if len(ordered) > 1:
        assert all(len(a.events) <= len(b.events) for a, b in zip(ordered, ordered[1:]))
