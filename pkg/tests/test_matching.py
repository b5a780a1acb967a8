"""Minimum-weight perfect matching against exhaustive enumeration."""

import random

import pytest

from aapsm.errors import MatchingInfeasibleError
from aapsm.matching import min_weight_perfect_matching

from oracles import min_perfect_matching_weight


def test_two_nodes_one_edge():
    pairs, total = min_weight_perfect_matching([0, 1], [(0, 1, 4)])
    assert pairs == [(0, 1)]
    assert total == 4


def test_four_cycle_picks_light_edges():
    edges = [(0, 1, 1), (1, 2, 2), (2, 3, 1), (3, 0, 2)]
    pairs, total = min_weight_perfect_matching(range(4), edges)
    assert total == 2
    assert pairs == [(0, 1), (2, 3)]


def test_empty_graph():
    assert min_weight_perfect_matching([], []) == ([], 0)


def test_odd_count_infeasible():
    with pytest.raises(MatchingInfeasibleError):
        min_weight_perfect_matching([0, 1, 2], [(0, 1, 1)])


def test_no_perfect_matching_infeasible():
    # star: center can match only one leaf
    with pytest.raises(MatchingInfeasibleError):
        min_weight_perfect_matching(range(4), [(0, 1, 1), (0, 2, 1), (0, 3, 1)])


def test_zero_weights_allowed():
    pairs, total = min_weight_perfect_matching(range(4), [(0, 1, 0), (2, 3, 0), (0, 2, 5)])
    assert total == 0


def test_parallel_edges_collapse_to_cheapest():
    pairs, total = min_weight_perfect_matching([0, 1], [(0, 1, 9), (1, 0, 2)])
    assert total == 2


def test_matches_enumeration_oracle():
    rng = random.Random(3111)
    checked = 0
    while checked < 150:
        n = rng.choice((4, 6, 8, 10, 12))
        density = rng.uniform(0.3, 0.9)
        edges = []
        for u in range(n):
            for v in range(u + 1, n):
                if rng.random() < density:
                    edges.append((u, v, rng.randint(0, 50)))
        expect = min_perfect_matching_weight(range(n), edges)
        if expect is None:
            with pytest.raises(MatchingInfeasibleError):
                min_weight_perfect_matching(range(n), edges)
        else:
            pairs, total = min_weight_perfect_matching(range(n), edges)
            assert total == expect
            assert len(pairs) == n // 2
        checked += 1


def test_large_weights_stay_exact():
    w = 10**6
    edges = [(0, 1, w), (2, 3, w), (0, 2, 1)]
    pairs, total = min_weight_perfect_matching(range(4), edges)
    assert pairs == [(0, 1), (2, 3)]
    assert total == 2 * w
