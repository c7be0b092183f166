import itertools

import pytest
from hypothesis import given, settings, strategies as st

from hypergt.bench.oracle import TestOracle
from hypergt.codes import TestMatrix
from hypergt.errors import InconsistencyError, PreconditionError
from hypergt.hypergraph import Hypergraph, gen_random_uniform, normalize
from hypergt.stages import (Schedule, default_schedule, mutual_difference_prune, one_stage_search,
                            reduced_discard_stage, s_stage_search, three_stage_search,
                            two_stage_search)


def fs(*vs):
    return frozenset(vs)


def pairs(n):
    return [frozenset(c) for c in itertools.combinations(range(1, n + 1), 2)]


@pytest.mark.parametrize("d,s,expected", [
    (64, 3, (16, 4, 1)),
    (10, 2, (4, 1)),
    (5, 5, (4, 3, 2, 1)),
    (16, 2, (4, 1)),
    (16, 3, (7, 3, 1)),
    (4, 2, (2, 1)),
    (1, 1, (1,)),
    (2, 2, (1,)),
    (7, 1, (1,)),
])
def test_default_schedule(d, s, expected):
    assert default_schedule(d, s).b == expected


@given(st.integers(1, 200), st.integers(1, 8))
def test_default_schedule_invariants(d, s):
    if s > d:
        with pytest.raises(PreconditionError):
            default_schedule(d, s)
        return
    b = default_schedule(d, s).b
    assert b[-1] == 1 and len(b) <= s
    assert all(x > y for x, y in zip(b, b[1:]))
    assert b == (1,) or b[0] < d
    # each kept value is a ceiling root of d
    for x in b:
        assert any((x - 1) ** s < d ** k <= x ** s for k in range(s))


@pytest.mark.parametrize("b", [(), (2,), (3, 3, 1), (1, 2), (5, 1)])
def test_schedule_rejects(b):
    with pytest.raises(PreconditionError):
        Schedule(b, 5)


def test_prune_examples():
    assert mutual_difference_prune([fs(1, 2, 3), fs(1, 2, 4)], 2) == [fs(1, 2, 3), fs(1, 2, 4)]
    assert mutual_difference_prune([fs(1, 2, 3), fs(1, 4, 5)], 2) == []
    assert mutual_difference_prune([fs(4, 5)], 1) == [fs(4, 5)]


def test_prune_single_pass_vs_fixpoint():
    S = [fs(1), fs(1, 2, 3), fs(2, 3, 4, 5)]
    # {1} loses to {1,2,3} (diff 2); {1,2,3} loses to {2,3,4,5} (diff 2)
    assert mutual_difference_prune(S, 2) == [fs(2, 3, 4, 5)]
    assert mutual_difference_prune(S, 3) == [fs(1, 2, 3), fs(2, 3, 4, 5)]
    assert mutual_difference_prune(S, 3, fixpoint=True) == [fs(1, 2, 3), fs(2, 3, 4, 5)]


@given(st.lists(st.frozensets(st.integers(1, 7), max_size=4), max_size=8, unique=True),
       st.integers(1, 4))
@settings(max_examples=150, deadline=None)
def test_prune_matches_definition(S, b):
    want = [e for e in S if all(len(f - e) < b for f in S if f != e)]
    assert set(mutual_difference_prune(S, b)) == set(want)


@pytest.mark.parametrize("estar", pairs(5))
def test_one_stage_all_pairs(estar):
    got = one_stage_search(pairs(5), 2, seed=1, oracle=TestOracle(estar))
    assert got == estar


def test_one_stage_nested():
    oracle = TestOracle({1, 2})
    assert one_stage_search([{1}, {1, 2}], oracle=oracle) == fs(1, 2)
    assert one_stage_search([{1}, {1, 2}], oracle=TestOracle({1})) == fs(1)


def test_one_stage_single_edge_uses_no_tests():
    oracle = TestOracle({3, 4})
    assert one_stage_search([{3, 4}], oracle=oracle) == fs(3, 4)
    assert oracle.tests == 0


class LyingOracle:
    """Answers every pool positively (no hyperedge explains that)."""

    def query(self, stage, matrix):
        return (1,) * matrix.t


class NegativeOracle:
    def query(self, stage, matrix):
        return (0,) * matrix.t


def test_one_stage_rejects_incomparable_survivors():
    with pytest.raises(InconsistencyError):
        one_stage_search(pairs(4), oracle=LyingOracle())


def test_one_stage_rejects_no_survivors():
    with pytest.raises(InconsistencyError):
        one_stage_search(pairs(4), oracle=NegativeOracle())


E3 = [fs(1, 2, 3), fs(1, 2, 4), fs(1, 5, 6)]


def test_reduced_stage_true_pivot():
    res = reduced_discard_stage(E3, b=3, p=1, oracle=TestOracle({1, 2, 3}), n=6)
    assert res.pivot == fs(1, 2, 3)
    assert res.survivors == {fs(1, 2, 3): fs()}
    assert res.ledger == fs(1, 2, 3)
    assert res.pivot_defective == fs(1, 2, 3)
    assert res.tests == res.matrix.t
    # last three rows are singletons on the pivot
    assert res.matrix.pools[-3:] == [fs(1), fs(2), fs(3)]


def test_reduced_stage_other_edge():
    res = reduced_discard_stage(E3, b=3, p=1, oracle=TestOracle({1, 5, 6}), n=6)
    assert res.pivot == fs(1, 2, 3)
    assert res.pivot_defective == fs(1) and res.pivot_clean == fs(2, 3)
    assert res.survivors == {fs(1, 5, 6): fs(5, 6)}
    assert res.ledger == fs(1)


def test_reduced_stage_single_edge():
    res = reduced_discard_stage([fs(2, 4)], b=2, p=1, oracle=TestOracle({2, 4}), n=4)
    assert res.survivors == {fs(2, 4): fs()}
    assert res.tests == 2


def test_reduced_stage_preconditions():
    with pytest.raises(PreconditionError):
        reduced_discard_stage(E3, b=2, p=1, oracle=TestOracle({1, 2, 3}))  # max diff 2
    with pytest.raises(PreconditionError):
        reduced_discard_stage(E3, b=3, p=3, oracle=TestOracle({1, 2, 3}))


def test_reduced_stage_no_survivors():
    with pytest.raises(InconsistencyError):
        reduced_discard_stage(E3, b=3, p=1, oracle=NegativeOracle())


def test_reduced_stage_keeps_ledger():
    res = reduced_discard_stage({fs(1, 2, 9): fs(1, 2), fs(1, 3, 9): fs(1, 3)}, b=2, p=1,
                                oracle=TestOracle({1, 3, 9}), ledger={9}, n=9)
    assert res.survivors == {fs(1, 3, 9): fs(3)}
    assert res.ledger == fs(1, 9)


def test_s_stage_one_stage_schedule():
    for estar in pairs(6):
        oracle = TestOracle(estar)
        got, trace = s_stage_search(pairs(6), (1,), seed=2, oracle=oracle)
        assert got == estar
        assert trace.tests_per_stage == [oracle.tests]
        assert oracle.batch_count == 1


def test_s_stage_singletons():
    E = [{v} for v in range(1, 8)]
    for v in range(1, 8):
        got, _ = s_stage_search(E, 1, oracle=TestOracle({v}))
        assert got == fs(v)


def test_s_stage_random_uniform_two_stages():
    H = gen_random_uniform(40, 4, 100, seed=7)
    sch = default_schedule(4, 2)
    assert sch.b == (2, 1)
    for e in H.edges:
        oracle = TestOracle(e)
        got, trace = s_stage_search(H, sch, oracle=oracle)
        assert got == e
        assert oracle.batch_count == 2 == len(trace.stages)


def test_two_and_three_stage_wrappers():
    H = gen_random_uniform(12, 4, 30, seed=3)
    for e in H.edges:
        assert two_stage_search(H, oracle=TestOracle(e))[0] == e
        assert three_stage_search(H, oracle=TestOracle(e))[0] == e


def test_trace_csv():
    H = gen_random_uniform(20, 4, 40, seed=1)
    _, trace = s_stage_search(H, 2, oracle=TestOracle(H.edges[5]))
    lines = trace.to_csv().splitlines()
    assert lines[0] == ("stage,t_stage,survivors_before,survivors_after_decode,"
                        "survivors_after_prune,pivot_size,ledger_size")
    assert len(lines) == 3
    assert trace.total_tests == sum(trace.tests_per_stage)


def test_s_stage_deterministic():
    H = gen_random_uniform(30, 5, 60, seed=4)
    a = s_stage_search(H, 3, seed=11, oracle=TestOracle(H.edges[0]))[1].tests_per_stage
    b = s_stage_search(H, 3, seed=11, oracle=TestOracle(H.edges[0]))[1].tests_per_stage
    assert a == b


def test_s_stage_rejects_bad_schedule():
    with pytest.raises(PreconditionError):
        s_stage_search(pairs(4), (2, 1), oracle=TestOracle({1, 2}))


def test_s_stage_inconsistent_oracle():
    H = gen_random_uniform(20, 4, 40, seed=1)
    with pytest.raises(InconsistencyError):
        s_stage_search(H, 2, oracle=LyingOracle())


hypergraphs = st.lists(st.frozensets(st.integers(1, 10), min_size=1, max_size=5),
                       min_size=1, max_size=15, unique=True)


@given(hypergraphs, st.integers(1, 4), st.integers(0, 1000), st.data())
@settings(max_examples=120, deadline=None)
def test_s_stage_recovers_any_edge(edges, s, seed, data):
    H, _ = normalize(Hypergraph.build(10, edges))
    s = min(s, H.d)
    estar = data.draw(st.sampled_from(H.edges))
    oracle = TestOracle(estar)
    got, trace = s_stage_search(H, s, seed=seed, oracle=oracle)
    assert got == estar
    assert oracle.batch_count == len(default_schedule(H.d, s).b)
