"""Weighted set cover: scalable greedy plus an exact branch-and-bound for
small instances.

A candidate is (key, elements, weight).  Both solvers return the chosen keys;
the exact solver minimizes total weight and is intended for instances with a
few dozen candidates at most.
"""

from __future__ import annotations

from dataclasses import dataclass


@dataclass(frozen=True)
class CoverCandidate:
    key: tuple
    elements: frozenset
    weight: int


def greedy_cover(universe: frozenset, candidates: list[CoverCandidate]) -> list[tuple]:
    """Classic ratio greedy: maximize newly-covered / weight.

    Ties break toward the smaller weight, then the smaller key.  Elements no
    candidate covers make the instance infeasible (ValueError); filter them
    out beforehand.
    """
    coverable = frozenset().union(*(c.elements for c in candidates)) if candidates else frozenset()
    if not universe <= coverable:
        raise ValueError(f"uncoverable elements: {sorted(universe - coverable)}")
    chosen: list[tuple] = []
    remaining = set(universe)
    pool = sorted(candidates, key=lambda c: c.key)
    while remaining:
        best = None
        best_new = 0
        for c in pool:
            new = len(c.elements & remaining)
            if new == 0:
                continue
            if best is None:
                best, best_new = c, new
                continue
            # compare new/weight as cross products to stay in integers
            lhs = new * best.weight
            rhs = best_new * c.weight
            if lhs > rhs or (lhs == rhs and (c.weight, c.key) < (best.weight, best.key)):
                best, best_new = c, new
        assert best is not None
        chosen.append(best.key)
        remaining -= best.elements
    return chosen


def exact_cover(
    universe: frozenset, candidates: list[CoverCandidate]
) -> list[tuple] | None:
    """Minimum-total-weight cover by branch and bound; None when infeasible.

    Branches on the uncovered element with the fewest covering candidates and
    prunes with the greedy solution as the incumbent.
    """
    coverable = frozenset().union(*(c.elements for c in candidates)) if candidates else frozenset()
    if not universe <= coverable:
        return None
    if not universe:
        return []

    try:
        incumbent_keys = greedy_cover(universe, candidates)
    except ValueError:
        return None
    by_key = {c.key: c for c in candidates}
    best_cost = sum(by_key[k].weight for k in incumbent_keys)
    best_keys = list(incumbent_keys)

    ordered = sorted(candidates, key=lambda c: (c.weight, c.key))
    covering: dict = {
        el: [c for c in ordered if el in c.elements] for el in universe
    }

    def search(remaining: frozenset, cost: int, picked: list[tuple]) -> None:
        nonlocal best_cost, best_keys
        if not remaining:
            if cost < best_cost:
                best_cost = cost
                best_keys = list(picked)
            return
        if cost + _min_cover_bound(remaining, covering) >= best_cost:
            return
        pivot = min(remaining, key=lambda el: (len(covering[el]), el))
        for c in covering[pivot]:
            if cost + c.weight >= best_cost:
                continue
            picked.append(c.key)
            search(remaining - c.elements, cost + c.weight, picked)
            picked.pop()

    search(universe, 0, [])
    return best_keys


def _min_cover_bound(remaining: frozenset, covering: dict) -> int:
    """Lower bound: the most expensive min-cost cover among remaining elements."""
    return max(min(c.weight for c in covering[el]) for el in remaining)
