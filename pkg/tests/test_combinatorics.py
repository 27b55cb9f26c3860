"""Tests for configuration graphs, matchings, transversals and surplus."""

from __future__ import annotations

from itertools import combinations

import networkx as nx
import numpy as np
import pytest

from confcount.combinatorics import (
    ConfigGraph,
    Transversal,
    build_graph,
    count_perfect_matchings,
    count_weighted_transversals,
    enumerate_weighted_transversals,
    hall_violator,
    has_perfect_matching,
    maximum_matching,
    prune,
    surplus,
    surplus_condition,
    surplus_condition_via_matchings,
    surplus_witness,
    uncovered_markings,
)
from confcount.exceptions import GraphError
from confcount.instance import Instance, parse_instance
from tests.conftest import random_instance

# --- Helpers ---


def _make_graph(size: int, edges: list[tuple[int, int]]) -> ConfigGraph:
    return ConfigGraph(
        left=tuple(range(1, size + 1)),
        right=tuple(range(1, size + 1)),
        edges=frozenset(edges),
    )


def _random_graph(rng: np.random.Generator, size: int, density: float) -> ConfigGraph:
    edges = [
        (i, j)
        for i in range(1, size + 1)
        for j in range(1, size + 1)
        if rng.random() < density
    ]
    return _make_graph(size, edges)


def _networkx_matching_size(g: ConfigGraph) -> int:
    graph = nx.Graph()
    left = [("L", i) for i in g.left]
    graph.add_nodes_from(left, bipartite=0)
    graph.add_nodes_from((("R", j) for j in g.right), bipartite=1)
    graph.add_edges_from((("L", i), ("R", j)) for i, j in g.edges)
    matching = nx.bipartite.hopcroft_karp_matching(graph, top_nodes=left)
    return len(matching) // 2


# --- Graph construction ---


def test_build_graph_edges(row1: Instance):
    g = build_graph(row1)
    assert g.left == (1, 2, 3, 4, 5, 6)
    assert g.right == (1, 2)
    assert g.left_neighbors(2) == (1, 2)
    assert g.left_neighbors(6) == (2,)
    assert g.right_neighbors(1) == (1, 2, 3, 4, 5)
    assert g.degree(1) == 1


def test_prune_balances_graph(row3: Instance):
    g = prune(build_graph(row3), (1, 3, 5, 7))
    assert g.balanced
    assert g.left == (2, 4, 6, 8)
    assert all(i not in (1, 3, 5, 7) for i, _ in g.edges)


def test_prune_rejects_wrong_size(row3: Instance):
    with pytest.raises(GraphError, match="expected 4"):
        prune(build_graph(row3), (1, 2, 3))


def test_prune_rejects_foreign_vertex(row3: Instance):
    with pytest.raises(GraphError, match="not a subset"):
        prune(build_graph(row3), (1, 2, 3, 9))


# --- Matchings ---


def test_has_perfect_matching_rejects_unbalanced(row1: Instance):
    with pytest.raises(GraphError, match="unbalanced"):
        has_perfect_matching(build_graph(row1))


def test_maximum_matching_agrees_with_networkx():
    rng = np.random.default_rng(7)
    for _ in range(200):
        g = _random_graph(rng, int(rng.integers(1, 7)), 0.4)
        assert len(maximum_matching(g)) == _networkx_matching_size(g)


def test_hall_violator_witnesses_missing_matching():
    g = _make_graph(3, [(1, 1), (2, 1), (3, 2), (3, 3)])
    assert not has_perfect_matching(g)
    violator = hall_violator(g)
    assert violator == (1, 2)


def test_hall_violator_none_when_matchable():
    g = _make_graph(2, [(1, 1), (1, 2), (2, 2)])
    assert has_perfect_matching(g)
    assert hall_violator(g) is None


def test_hall_violator_iff_no_perfect_matching():
    rng = np.random.default_rng(11)
    for _ in range(100):
        g = _random_graph(rng, int(rng.integers(1, 6)), 0.35)
        assert (hall_violator(g) is None) == has_perfect_matching(g)


# --- Weighted transversals ---


def test_worked_example_counts(row3: Instance):
    g = prune(build_graph(row3), (1, 3, 5, 7))
    assert count_weighted_transversals(g, 2) == 3
    assert count_perfect_matchings(g) == 2


def test_worked_example_enumeration_is_valid(row3: Instance):
    g = prune(build_graph(row3), (1, 3, 5, 7))
    found = list(enumerate_weighted_transversals(g, 2))
    assert len(found) == 3
    assert all(t.is_valid_for(g) for t in found)


def test_empty_graph_has_one_transversal():
    assert count_weighted_transversals(_make_graph(0, []), 3) == 1


def test_complete_two_by_two():
    g = _make_graph(2, [(1, 1), (1, 2), (2, 1), (2, 2)])
    # weights (a, m-a; m-a, a) for a in 0..m
    assert count_weighted_transversals(g, 1) == 2
    assert count_weighted_transversals(g, 2) == 3
    assert count_weighted_transversals(g, 5) == 6


def test_isolated_vertex_gives_zero():
    g = _make_graph(2, [(1, 1), (1, 2)])
    assert count_weighted_transversals(g, 2) == 0


def test_level_must_be_positive():
    with pytest.raises(GraphError, match="at least 1"):
        count_weighted_transversals(_make_graph(1, [(1, 1)]), 0)


def test_dp_matches_enumeration_on_random_graphs():
    rng = np.random.default_rng(3)
    checked = 0
    while checked < 200:
        size = int(rng.integers(1, 6))
        g = _random_graph(rng, size, 0.5)
        if len(g.edges) > 12:
            continue
        for m in (1, 2, 3):
            naive = sum(1 for _ in enumerate_weighted_transversals(g, m))
            assert count_weighted_transversals(g, m) == naive
        checked += 1


def test_transversal_counts_are_monotone():
    rng = np.random.default_rng(5)
    for _ in range(200):
        g = _random_graph(rng, int(rng.integers(1, 7)), 0.45)
        t1, t2, t3 = (count_weighted_transversals(g, m) for m in (1, 2, 3))
        assert t1 <= t2 <= t3
        assert (t1 == 0) == (t2 == 0) == (t3 == 0)


def test_transversal_addition():
    g = _make_graph(2, [(1, 1), (1, 2), (2, 1), (2, 2)])
    diagonal = Transversal(level=1, weights={(1, 1): 1, (2, 2): 1})
    anti = Transversal(level=1, weights={(1, 2): 1, (2, 1): 1})
    total = diagonal + anti
    assert total.level == 2
    assert total.is_valid_for(g)
    assert dict(total.weights) == {(1, 1): 1, (2, 2): 1, (1, 2): 1, (2, 1): 1}


def test_is_valid_for_rejects_foreign_edge():
    g = _make_graph(1, [(1, 1)])
    assert not Transversal(level=1, weights={(1, 2): 1}).is_valid_for(g)
    assert not Transversal(level=2, weights={(1, 1): 1}).is_valid_for(g)


# --- Surplus ---


def test_surplus_of_table_rows(row1: Instance, row2: Instance, row3: Instance, row4: Instance):
    for inst in (row1, row2, row3, row4):
        assert surplus(inst) == inst.r + 1
        assert surplus_condition(inst)


def test_surplus_of_repeated_constraint():
    inst = parse_instance("1234,1234", r=2)
    assert surplus(inst) == 2
    assert surplus_witness(inst) == (1, 2)
    assert not surplus_condition(inst)
    assert not surplus_condition_via_matchings(inst)


def test_surplus_witness_prefers_smallest_subset(row2: Instance):
    witness = surplus_witness(row2)
    union = set().union(*(row2.constraints[j - 1] for j in witness))
    assert len(union) - len(witness) == surplus(row2)
    assert witness == (1,)


def test_surplus_of_single_constraint():
    inst = parse_instance("12345", r=3)
    assert surplus(inst) == 4
    assert surplus_witness(inst) == (1,)


def test_surplus_without_constraints():
    with pytest.raises(GraphError):
        surplus(Instance.create(r=2, n=3, constraints=()))


def test_surplus_equivalence_on_random_instances():
    rng = np.random.default_rng(17)
    for index in range(100):
        r = 2 + index % 2
        k = int(rng.integers(1, 9 - r - 1 + 1))
        inst = random_instance(rng, r, k)
        assert (surplus(inst) == r + 1) == surplus_condition_via_matchings(inst)


def test_uncovered_markings():
    inst = parse_instance("1234,1234", r=2)
    assert uncovered_markings(inst) == (5,)
    assert uncovered_markings(parse_instance("12345,23456", r=3)) == ()


def test_surplus_condition_matches_all_prunings(row3: Instance):
    g = build_graph(row3)
    assert all(
        has_perfect_matching(prune(g, s)) for s in combinations(row3.markings, row3.r + 1)
    )
