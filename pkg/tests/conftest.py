"""Shared fixtures: hand-built conflict fixtures and random instance samplers."""

from __future__ import annotations

import random

import pytest
from hypothesis import settings

from aapsm.conflict_graph import build_conflict_graph
from aapsm.errors import GeometryError, LayoutValidationError
from aapsm.layout import (
    DesignRules,
    FEATURE_LAYER,
    Layout,
    Rect,
    SHIFTER_LAYER,
    SIDE_HIGH,
    SIDE_LOW,
    Shifter,
    find_overlapping_pairs,
    generate_shifters,
)
from aapsm.planar import find_crossings

settings.register_profile("ci", derandomize=True, max_examples=60)
settings.load_profile("ci")


def make_shifter(sid: int, feature_id: int, side: str, x: int, y: int, w=100, h=100):
    return Shifter(Rect(x, y, x + w, y + h, SHIFTER_LAYER, sid), feature_id, side, sid)


RING_RULES = DesignRules(
    critical_width=150, shifter_width=200, shifter_gap=50, min_shifter_spacing=350
)


@pytest.fixture
def odd_ring_fixture():
    """Three features whose six shifters form a ring: consecutive ring
    neighbours overlap, producing a 9-edge unbalanced cycle (3 feature edges
    plus 3 two-edge overlap chains)."""
    anchors = [
        (0, 0),
        (400, -50),
        (800, 0),
        (800, 400),
        (400, 450),
        (0, 400),
    ]
    shifters = tuple(
        make_shifter(i, i // 2, SIDE_LOW if i % 2 == 0 else SIDE_HIGH, x, y)
        for i, (x, y) in enumerate(anchors)
    )
    pairs = find_overlapping_pairs(shifters, RING_RULES)
    assert {(a, b) for a, b, _ in pairs} == {(1, 2), (3, 4), (0, 5)}
    return shifters, pairs, RING_RULES


@pytest.fixture
def comb_layout():
    """Bar under two teeth: the bar's upper shifter overlaps both shifters of
    each tooth, one odd cycle per tooth."""
    rules = DesignRules(150, 200, 50, 200)
    rects = (
        Rect(0, 0, 2300, 100, FEATURE_LAYER, 0),  # bar
        Rect(400, 500, 500, 1300, FEATURE_LAYER, 1),  # tooth
        Rect(1300, 500, 1400, 1300, FEATURE_LAYER, 2),  # tooth
    )
    return Layout(rects, rules, (-600, -600, 2900, 1900))


def micro_layout(rng: random.Random, max_features=4):
    """Small random layout of vertical wires and horizontal bars; may be
    unassignable; rejects geometry the model cannot host."""
    rules = DesignRules(150, 200, 50, 200)
    n = rng.randint(2, max_features)
    rects = []
    for i in range(n):
        for _attempt in range(40):
            if rng.random() < 0.6:
                w, h = 100, rng.choice((600, 800, 1000))
            else:
                w, h = rng.choice((900, 1200, 1500)), 100
            x = rng.randrange(0, 2200, 25) + rng.choice((0, 3, 7, 11))
            y = rng.randrange(0, 2200, 25) + rng.choice((0, 1, 5, 13))
            cand = Rect(x, y, x + w, y + h, FEATURE_LAYER, i)
            if all(not cand.interior_overlaps(r) for r in rects):
                rects.append(cand)
                break
        else:
            return None
    try:
        return Layout(tuple(rects), rules)
    except LayoutValidationError:
        return None


def micro_pcg(rng: random.Random, max_features=4, require_planar=False, max_edges=None):
    """Random micro layout turned into a conflict graph; None when rejected."""
    layout = micro_layout(rng, max_features)
    if layout is None:
        return None
    shifters = generate_shifters(layout)
    pairs = find_overlapping_pairs(shifters, layout.rules)
    graph = build_conflict_graph(shifters, pairs, layout.rules)
    if max_edges is not None and len(graph.edges) > max_edges:
        return None
    if require_planar:
        try:
            if find_crossings(graph):
                return None
        except GeometryError:
            return None
    return layout, shifters, pairs, graph


def sample_micro_pcgs(seed: int, count: int, **kwargs):
    """Deterministic stream of accepted micro conflict-graph instances."""
    rng = random.Random(seed)
    out = []
    guard = 0
    while len(out) < count:
        guard += 1
        assert guard < count * 300, "micro instance sampler rejecting too much"
        inst = micro_pcg(rng, **kwargs)
        if inst is not None:
            out.append(inst)
    return out


def random_multigraph(rng: random.Random, max_nodes=6, max_edges=8, max_weight=12):
    """Random connected-ish multigraph for T-join and matching tests."""
    n = rng.randint(2, max_nodes)
    m = rng.randint(1, max_edges)
    edges = []
    for _ in range(m):
        u = rng.randrange(n)
        v = rng.randrange(n)
        while v == u:
            v = rng.randrange(n)
        edges.append((u, v, rng.randint(0, max_weight)))
    return n, edges
