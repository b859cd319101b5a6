import itertools
import random
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from invspan.family import (
    CountingOracle,
    DagPathFamily,
    EnumerationCapExceeded,
    ExplicitFamily,
    FamilyError,
    SpanningTreeFamily,
    explicit_copy,
    reversed_order,
)

costs_st = st.lists(st.integers(-5, 5).map(Fraction), min_size=6, max_size=6)


def brute(family, costs, order=None):
    members = family.enumerate()
    best = min(sum((costs[s] for s in F), Fraction(0)) for F in members)
    return best


def random_graph(seed, nv=5, extra=3):
    rng = random.Random(seed)
    vs = list(range(nv))
    edges = [(i, rng.randrange(i)) for i in range(1, nv)]
    edges += [tuple(rng.sample(vs, 2)) for _ in range(extra)]
    return vs, edges


def random_dag(seed, nv=5, m=7):
    rng = random.Random(seed)
    arcs = [(i, i + 1) for i in range(nv - 1)]
    while len(arcs) < m:
        a, b = sorted(rng.sample(range(nv), 2))
        arcs.append((a, b))
    return list(range(nv)), arcs


def test_explicit_tie_break_is_lexicographic():
    fam = ExplicitFamily(4, [(2, 3), (0, 1), (1, 2)])
    zero = [Fraction(0)] * 4
    assert fam.min_cost_member(zero).set == (0, 1)
    assert fam.min_cost_member(zero, reversed_order(4)).set == (2, 3)


def test_explicit_rejects_bad_sets():
    with pytest.raises(FamilyError, match="empty"):
        ExplicitFamily(2, [])
    with pytest.raises(FamilyError):
        ExplicitFamily(2, [(0, 5)])


def test_contains():
    fam = ExplicitFamily(3, [(0, 1), (2,)])
    assert fam.contains((0, 1)) and not fam.contains(())


@given(st.integers(0, 10**6), costs_st)
def test_tree_oracle_matches_enumeration(seed, costs):
    vs, edges = random_graph(seed)
    fam = SpanningTreeFamily(vs, edges)
    c = (costs * 2)[:len(edges)]
    res = fam.min_cost_member(c)
    assert res.cost == brute(fam, c)
    assert fam.contains(res.set)


@given(st.integers(0, 10**6), costs_st)
def test_dag_oracle_matches_enumeration(seed, costs):
    vs, arcs = random_dag(seed)
    fam = DagPathFamily(vs, arcs, 0, vs[-1])
    c = (costs * 2)[:len(arcs)]
    res = fam.min_cost_member(c)
    assert res.cost == brute(fam, c)
    assert fam.contains(res.set)


@given(st.integers(0, 10**6), costs_st, st.integers(-3, 3))
def test_oracle_translation_covariance(seed, costs, shift):
    vs, edges = random_graph(seed)
    fam = SpanningTreeFamily(vs, edges)
    c = (costs * 2)[:len(edges)]
    t = [Fraction(shift)] * len(edges)
    a = fam.min_cost_member(c)
    b = fam.min_cost_member([x + y for x, y in zip(c, t)])
    # uniform shift adds the same amount to every spanning tree
    assert b.set == a.set
    assert b.cost == a.cost + shift * (len(vs) - 1)


def test_tree_oracle_tie_break_prefers_low_ranks():
    fam = SpanningTreeFamily("xyz", [("x", "y"), ("y", "z"), ("x", "z")])
    zero = [Fraction(0)] * 3
    assert fam.min_cost_member(zero).set == (0, 1)
    assert fam.min_cost_member(zero, reversed_order(3)).set == (1, 2)


def test_dag_contains_and_example():
    fam = DagPathFamily("abc", [("a", "b"), ("b", "c"), ("a", "c")], "a", "c")
    assert fam.contains((2,))
    assert fam.contains((0, 1))
    assert not fam.contains((0,))
    assert sorted(fam.enumerate()) == [(0, 1), (2,)]


def test_graph_errors():
    with pytest.raises(FamilyError, match="disconnected"):
        SpanningTreeFamily("abcd", [("a", "b"), ("c", "d")])
    with pytest.raises(FamilyError, match="acyclic"):
        DagPathFamily("abc", [("a", "b"), ("b", "a"), ("b", "c")], "a", "c")
    with pytest.raises(FamilyError, match="unreachable"):
        DagPathFamily("abc", [("b", "c")], "a", "c")


def test_enumeration_cap():
    vs = list(range(6))
    edges = list(itertools.combinations(vs, 2))
    with pytest.raises(EnumerationCapExceeded, match="too large"):
        SpanningTreeFamily(vs, edges).enumerate(cap=10)


def test_counting_oracle_and_explicit_copy():
    vs, edges = random_graph(3)
    fam = SpanningTreeFamily(vs, edges)
    oracle = CountingOracle(fam)
    c = [Fraction(i % 3) for i in range(len(edges))]
    oracle.min_cost_member(c)
    oracle.min_cost_member(c)
    assert oracle.calls == 2
    copy = explicit_copy(fam)
    assert copy.min_cost_member(c).cost == fam.min_cost_member(c).cost
