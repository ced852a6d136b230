import itertools
import math
import random
from collections import Counter

import pytest

from src.model import Event, ProblemSpec, binom, enumerate_events, make_tuple, tuple_type_of
from src.venn import (BudgetExhausted, IntersectionSpectrum, SpectrumInconsistencyError,
                      SpectrumSearch, TupleType, VennSpectrum, box_union_sizes, check_spectrum_constraints,
                      digit_mask, enumerate_spectra, events_compatible,
                      intersection_spectrum_of, is_compatible, p_from_q, q_from_p,
                      venn_spectrum_of)


def dense(q11, q10, q01, q00):
    """(Q_11, Q_10, Q_01, Q_00) -> k=2 的谱"""
    return VennSpectrum.from_dense([q00, q01, q10, q11])


def test_digit_mask_counts_positions_from_the_left():
    assert digit_mask([1], 3) == 0b100
    assert digit_mask([2, 3], 3) == 0b011
    with pytest.raises(ValueError):
        digit_mask([4], 3)


def test_venn_spectrum_of():
    spec = venn_spectrum_of([(1, 2, 3), (3, 4, 5)], 6)
    assert spec.as_dict() == {'11': 1, '10': 2, '01': 2, '00': 1}
    assert venn_spectrum_of([(1, 2, 3)], 5).as_dict() == {'1': 3, '0': 2}
    assert venn_spectrum_of([(1, 2), (1, 2)], 3).as_dict() == {'11': 2, '10': 0, '01': 0, '00': 1}


def test_sparse_storage_drops_zero_parts():
    spec = venn_spectrum_of([(1, 2), (1, 2)], 3)
    assert spec.parts == ((0b00, 1), (0b11, 2))
    assert spec.n == 3
    assert spec.q(0b10) == 0


def test_p_from_q():
    spec = venn_spectrum_of([(1, 2, 3), (3, 4, 5)], 6)
    assert p_from_q(spec, [1, 2]) == 1
    assert p_from_q(spec, [1]) == 3
    spec3 = venn_spectrum_of([(1, 2, 3, 4), (2, 3, 4), (3, 4, 6)], 7)
    assert p_from_q(spec3, [1, 2, 3]) == spec3.q(0b111) == 2
    with pytest.raises(ValueError):
        p_from_q(spec, [])


def test_p_from_q_matches_direct_intersections():
    rng = random.Random(7)
    for _ in range(300):
        n = rng.randint(1, 8)
        k = rng.randint(1, 4)
        sets = [tuple(x for x in range(1, n + 1) if rng.random() < 0.6) for _ in range(k)]
        spectrum = venn_spectrum_of(sets, n)
        for size in range(1, k + 1):
            for idx in itertools.combinations(range(1, k + 1), size):
                direct = set.intersection(*(set(sets[m - 1]) for m in idx))
                assert p_from_q(spectrum, idx) == len(direct)


def test_spectrum_is_covariant_under_set_permutation():
    rng = random.Random(11)
    for _ in range(200):
        n = rng.randint(1, 6)
        k = rng.randint(1, 4)
        sets = [tuple(x for x in range(1, n + 1) if rng.random() < 0.5) for _ in range(k)]
        base = venn_spectrum_of(sets, n)
        weight = math.prod(math.factorial(q) for _, q in base.parts)
        for perm in itertools.permutations(range(k)):
            moved = venn_spectrum_of([sets[i] for i in perm], n)
            assert sorted(moved.dense()) == sorted(base.dense())
            assert math.prod(math.factorial(q) for _, q in moved.parts) == weight
            # 位置 m 上的集合换成原来的 perm[m-1], 对应的交集基数随之移动
            for size in range(1, k + 1):
                for idx in itertools.combinations(range(1, k + 1), size):
                    original = sorted(perm[m - 1] + 1 for m in idx)
                    assert p_from_q(moved, idx) == p_from_q(base, original)


def test_q_from_p_examples():
    ispec = IntersectionSpectrum(n=6, k=2, p={(1,): 3, (2,): 3, (1, 2): 1})
    assert q_from_p(ispec) == dense(1, 2, 2, 1)
    assert q_from_p(IntersectionSpectrum(n=5, k=1, p={(1,): 3})).as_dict() == {'1': 3, '0': 2}


def test_q_from_p_rejects_unrealizable():
    ispec = IntersectionSpectrum(n=3, k=2, p={(1,): 3, (2,): 3, (1, 2): 0})
    with pytest.raises(SpectrumInconsistencyError):
        q_from_p(ispec)


def test_inversion_roundtrip_exhaustive():
    for n in range(0, 5):
        subsets = [c for size in range(n + 1) for c in itertools.combinations(range(1, n + 1), size)]
        for k in (1, 2, 3):
            for sets in itertools.product(subsets, repeat=k):
                spectrum = venn_spectrum_of(sets, n)
                assert q_from_p(intersection_spectrum_of(spectrum)) == spectrum


@pytest.mark.slow
def test_inversion_roundtrip_exhaustive_n6():
    for n in (5, 6):
        subsets = [c for size in range(n + 1) for c in itertools.combinations(range(1, n + 1), size)]
        for sets in itertools.product(subsets, repeat=3):
            spectrum = venn_spectrum_of(sets, n)
            assert q_from_p(intersection_spectrum_of(spectrum)) == spectrum


def test_inversion_roundtrip_random():
    rng = random.Random(20240517)
    for _ in range(1000):
        n = rng.randint(0, 10)
        k = rng.randint(1, 4)
        sets = [tuple(x for x in range(1, n + 1) if rng.random() < 0.5) for _ in range(k)]
        spectrum = venn_spectrum_of(sets, n)
        ispec = intersection_spectrum_of(spectrum)
        assert ispec.get([]) == n
        assert q_from_p(ispec) == spectrum


def test_events_compatible():
    assert not events_compatible(1, (1, 2, 3), 2, (1, 2, 4), 2)
    assert events_compatible(1, (1, 2, 3), 2, (1, 4, 5), 2)
    assert events_compatible(1, (1, 2, 3), 1, (1, 2, 4), 2)
    assert not events_compatible(1, (1, 2), 2, (2, 3), 1)


def test_is_compatible(r33):
    assert not is_compatible(make_tuple([Event(1, (1, 2, 3)), Event(2, (1, 2, 4))]), r33)
    assert is_compatible(make_tuple([Event(1, (1, 2, 3)), Event(2, (1, 4, 5))]), r33)
    assert is_compatible(make_tuple([Event(1, (1, 2, 3)), Event(1, (1, 2, 4))]), r33)


def test_check_spectrum_constraints(r33):
    assert check_spectrum_constraints(dense(1, 2, 2, 0), TupleType((1, 1)), r33, 5)
    assert not check_spectrum_constraints(dense(2, 1, 1, 1), TupleType((1, 1)), r33, 5)
    assert not check_spectrum_constraints(dense(3, 0, 0, 0), TupleType((2, 0)), r33, 3)
    # 总和与 n 不符
    assert not check_spectrum_constraints(dense(1, 2, 2, 0), TupleType((1, 1)), r33, 6)


@pytest.mark.parametrize("args,ns", [((2, 2, (3, 3)), range(3, 6)), ((2, 1, (2, 3)), range(2, 6)),
                                     ((3, 1, (2, 2, 2)), range(2, 5))])
def test_is_compatible_agrees_with_spectrum_constraints(args, ns):
    spec = ProblemSpec(*args)
    for n in ns:
        events = enumerate_events(spec, n)
        for k in (1, 2, 3):
            for combo in itertools.combinations(events, k):
                tup = make_tuple(combo)
                spectrum = venn_spectrum_of(tup.vertex_sets(), n)
                ttype = TupleType(tuple_type_of(tup, spec.t))
                assert is_compatible(tup, spec) == check_spectrum_constraints(spectrum, ttype, spec, n)


def test_tuple_type_layout():
    ttype = TupleType((2, 0, 1))
    assert ttype.k == 3
    assert ttype.box_of_positions() == [1, 1, 3]
    assert ttype.box_ranges() == [(1, 1, 2), (3, 3, 1)]
    with pytest.raises(ValueError):
        TupleType((1, -1))


def test_box_union_sizes_matches_direct_count():
    prob = ProblemSpec(2, 2, (3, 3))
    ttype = TupleType((2, 1))
    sets = [(1, 2, 3), (1, 2, 4), (3, 4, 5)]
    spectrum = venn_spectrum_of(sets, 6)
    box1 = set(itertools.combinations((1, 2, 3), 2)) | set(itertools.combinations((1, 2, 4), 2))
    box2 = set(itertools.combinations((3, 4, 5), 2))
    assert box_union_sizes(spectrum, ttype, prob.r) == len(box1) + len(box2) == 8


def test_enumerate_spectra_are_valid_and_distinct(r33):
    ttype = TupleType((2, 1))
    found = list(enumerate_spectra(ttype, r33, 5))
    assert found
    assert len(set(found)) == len(found)
    assert all(check_spectrum_constraints(s, ttype, r33, 5) for s in found)


def test_enumerate_spectra_matches_filtered_realizations(r33):
    """每个可实现的合法谱都被枚举到"""
    n = 5
    ttype = TupleType((2, 1))
    triples = list(itertools.combinations(range(1, n + 1), 3))
    realized = {venn_spectrum_of([a, b, c], n) for a, b, c in itertools.product(triples, repeat=3)}
    expected = {s for s in realized if check_spectrum_constraints(s, ttype, r33, n)}
    assert set(enumerate_spectra(ttype, r33, n)) == expected


def test_enumerate_spectra_skips_types_that_do_not_fit(r33):
    assert list(enumerate_spectra(TupleType((5, 0)), r33, 4)) == []
    assert list(enumerate_spectra(TupleType((1, 0)), r33, 2)) == []


def test_enumerate_spectra_budget(r33):
    with pytest.raises(BudgetExhausted):
        list(enumerate_spectra(TupleType((2, 0)), r33, 6, budget=3))


def test_search_tick_counts_partial_spectra(r33):
    # 4 个点上两两不同的三元组, 各深度都只有一个谱
    search = SpectrumSearch([TupleType((4, 0))], r33, 4)
    found = list(search)
    assert [s.parts for _, s in found] == [((0b0111, 1), (0b1011, 1), (0b1101, 1), (0b1110, 1))]
    assert search.nodes == 4


def test_search_covers_several_types_in_one_tree(r33):
    types = [TupleType((2, 1)), TupleType((3, 0)), TupleType((1, 0))]
    together = Counter((t.counts, s) for t, s in SpectrumSearch(types, r33, 5))
    separate = Counter()
    for ttype in types:
        separate.update((ttype.counts, s) for s in enumerate_spectra(ttype, r33, 5))
    assert together == separate


@pytest.mark.parametrize("shards", [2, 3, 8])
def test_search_shards_partition_the_tree(r33, shards):
    types = [TupleType((2, 1)), TupleType((1, 2)), TupleType((3, 0))]
    whole = SpectrumSearch(types, r33, 5)
    expected = Counter((t.counts, s) for t, s in whole)
    merged = Counter()
    nodes = 0
    for i in range(shards):
        part = SpectrumSearch(types, r33, 5, shard=(i, shards))
        merged.update((t.counts, s) for t, s in part)
        nodes += part.nodes
    assert merged == expected
    assert nodes == whole.nodes


def test_search_rejects_bad_shard(r33):
    with pytest.raises(ValueError):
        SpectrumSearch([TupleType((1, 0))], r33, 4, shard=(2, 2))
