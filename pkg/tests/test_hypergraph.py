import itertools
import math

import pytest
from hypothesis import given, settings, strategies as st

from hypergt.errors import BudgetExceeded, ParseError, PreconditionError
from hypergt.hypergraph import (Hypergraph, edge_key, format_hypergraph, from_mask,
                                gen_bounded_intersection, gen_random_uniform,
                                high_degree_edge_subset, metrics, normalize, parse_hypergraph,
                                read_hypergraph, to_mask, write_hypergraph)


def H(n, *edges):
    return Hypergraph.build(n, edges)


def test_mask_roundtrip():
    assert to_mask({1, 3}) == 0b101
    assert from_mask(0b101) == frozenset({1, 3})
    assert edge_key({3, 1}) == (1, 3)


def test_build_sorts_canonically():
    h = H(4, {3, 4}, {1, 2}, {1})
    assert [edge_key(e) for e in h.edges] == [(1,), (1, 2), (3, 4)]
    assert h.m == 3 and h.d == 2
    assert h.degrees() == [2, 1, 1, 1]


@pytest.mark.parametrize("edges", [[{0, 1}], [{1, 5}], [set()], [{1}, {1}]])
def test_build_rejects_bad_edges(edges):
    with pytest.raises(PreconditionError):
        Hypergraph.build(4, edges)


def test_normalize_drops_isolated_vertices():
    h2, relabel = normalize(H(5, {1, 2}, {2, 3}))
    assert h2.n == 3
    assert h2.edges == (frozenset({1, 2}), frozenset({2, 3}))
    assert relabel == {1: 1, 2: 2, 3: 3}


def test_normalize_relabels_in_order():
    h2, relabel = normalize(H(9, {2, 9}, {4, 9}))
    assert relabel == {2: 1, 4: 2, 9: 3}
    assert h2.edges == (frozenset({1, 3}), frozenset({2, 3}))


def test_normalize_canonical_is_unchanged():
    h = H(3, {1, 2}, {2, 3})
    assert normalize(h)[0] == h


def test_normalize_empty():
    with pytest.raises(PreconditionError):
        normalize(Hypergraph.build(2, []))


def test_metrics_examples():
    mt = metrics(H(3, {1, 2}, {2, 3}))
    assert (mt.d, mt.min_diff, mt.max_diff, mt.max_intersection, mt.uniform) == (2, 1, 1, 1, True)
    mt = metrics(H(6, {1, 2, 3}, {1, 2, 4}, {1, 5, 6}))
    assert (mt.d, mt.min_diff, mt.max_diff, mt.max_intersection, mt.uniform) == (3, 1, 2, 2, True)
    mt = metrics(H(3, {1, 2, 3}))
    assert mt.d == 3 and mt.min_diff is None and mt.max_diff is None and mt.uniform
    assert mt.strict_diff_bound is None


def test_metrics_nested_flag():
    mt = metrics(H(2, {1}, {1, 2}))
    assert mt.nested and not mt.uniform
    assert mt.max_diff == 1 and mt.strict_diff_bound == 2


edge_sets = st.lists(st.frozensets(st.integers(1, 9), min_size=1, max_size=5),
                     min_size=1, max_size=12, unique=True)


@given(edge_sets)
@settings(max_examples=150, deadline=None)
def test_metrics_match_pairwise_enumeration(edges):
    h = Hypergraph.build(9, edges)
    mt = metrics(h)
    pairs = list(itertools.permutations(h.edges, 2))
    diffs = [len(a - b) for a, b in pairs]
    nonnested = [len(a - b) for a, b in pairs if not a <= b]
    assert mt.max_diff == (max(diffs) if diffs else None)
    assert mt.min_diff == (min(nonnested) if nonnested else None)
    assert mt.max_intersection == (max(len(a & b) for a, b in pairs) if pairs else None)
    assert mt.nested == any(a < b for a, b in pairs)
    assert mt.max_degree == max(sum(v in e for e in edges) for v in range(1, 10))


def test_high_degree_subset_examples():
    kept, lb = high_degree_edge_subset(H(3, {1, 2}, {1, 3}, {2, 3}), 2)
    assert len(kept) == 3 and lb == 3
    kept, lb = high_degree_edge_subset(H(4, {1, 2}, {3, 4}), 1)
    assert len(kept) == 2 and lb == 2
    with pytest.raises(PreconditionError):
        high_degree_edge_subset(H(4, {1, 2}, {3, 4}), 2)
    with pytest.raises(PreconditionError):
        high_degree_edge_subset(H(3, {1}, {2, 3}), 1)


def test_gen_uniform_forced_full_set():
    h = gen_random_uniform(5, 2, 10, seed=123)
    assert set(h.edges) == {frozenset(c) for c in itertools.combinations(range(1, 6), 2)}


def test_gen_uniform_deterministic():
    a = gen_random_uniform(40, 4, 100, seed=7)
    b = gen_random_uniform(40, 4, 100, seed=7)
    assert a == b
    assert a.m == 100 and all(len(e) == 4 for e in a.edges)
    assert gen_random_uniform(40, 4, 100, seed=8) != a


def test_gen_uniform_infeasible():
    with pytest.raises(PreconditionError):
        gen_random_uniform(4, 3, 10, seed=0)


def test_gen_bounded_partition():
    h = gen_bounded_intersection(9, 3, 3, 0, seed=5)
    assert h.m == 3
    assert set().union(*h.edges) == set(range(1, 10))


def test_gen_bounded_vacuous():
    h = gen_bounded_intersection(6, 3, 4, 2, seed=1)
    assert h.m == 4 and metrics(h).max_intersection <= 2


def test_gen_bounded_impossible():
    # every pair of 3-subsets of [4] shares two vertices
    assert all(len(set(a) & set(b)) == 2
               for a, b in itertools.combinations(itertools.combinations(range(4), 3), 2))
    with pytest.raises(BudgetExceeded):
        gen_bounded_intersection(4, 3, 4, 1, seed=0)


def test_gen_bounded_budget_reports_best():
    # cap allows 4 lines but random sampling rarely reaches it quickly
    with pytest.raises(BudgetExceeded) as info:
        gen_bounded_intersection(8, 3, 20, 1, seed=0, budget=50)
    assert info.value.best is not None


def test_text_roundtrip(tmp_path):
    h = H(6, {1, 5, 6}, {2, 3})
    text = format_hypergraph(h)
    assert parse_hypergraph(text) == h
    path = tmp_path / "h.txt"
    write_hypergraph(h, path)
    assert read_hypergraph(path) == h


@pytest.mark.parametrize("text", [
    "e 1 2\n",                    # missing header
    "n 3\ne 2 1\n",               # not increasing
    "n 3\ne 1 2\ne 1 2\n",        # duplicate
    "n 3\ne 1 4\n",               # out of range
    "n 3\nx 1\n",                 # unknown record
])
def test_parse_errors(text):
    with pytest.raises(ParseError):
        parse_hypergraph(text)


def test_parse_comments():
    h = parse_hypergraph("# demo\nn 3\n\ne 1 2\ne 3\n")
    assert h.edges == (frozenset({1, 2}), frozenset({3}))


def test_edge_count_consistency_with_math():
    # generator never exceeds C(n, d)
    h = gen_random_uniform(6, 3, math.comb(6, 3), seed=2)
    assert h.m == 20
