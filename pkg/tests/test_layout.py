"""Layout model: parsing, critical features, shifters, overlap pairs."""

import math
import random

import pytest
from hypothesis import given, strategies as st

from aapsm.errors import LayoutParseError, LayoutValidationError
from aapsm.layout import (
    DEFAULT_RULES,
    DesignRules,
    FEATURE_LAYER,
    Layout,
    Rect,
    SIDE_HIGH,
    SIDE_LOW,
    find_critical_features,
    find_overlapping_pairs,
    generate_shifters,
    parse_layout,
    rect_separation,
    serialize_layout,
)


class TestParse:
    def test_single_rect(self):
        layout = parse_layout("rect poly 0 0 100 1000\n")
        assert len(layout.rects) == 1
        r = layout.rects[0]
        assert (r.x_lo, r.y_lo, r.x_hi, r.y_hi) == (0, 0, 100, 1000)
        assert r.width * r.height == 100 * 1000  # 0.1um x 1um

    def test_empty_is_valid(self):
        layout = parse_layout("# nothing here\n\n")
        assert layout.rects == ()
        assert layout.rules == DEFAULT_RULES

    def test_overlapping_features_rejected(self):
        text = "rect poly 0 0 100 1000\nrect poly 50 10 150 900\n"
        with pytest.raises(LayoutValidationError):
            parse_layout(text)

    def test_touching_features_allowed(self):
        parse_layout("rect poly 0 0 100 1000\nrect poly 100 0 200 1000\n")

    def test_malformed_line_reports_number(self):
        with pytest.raises(LayoutParseError) as err:
            parse_layout("rect poly 0 0 100 1000\nrect poly nope 0 1 1\n")
        assert "line 2" in str(err.value)

    def test_unknown_record(self):
        with pytest.raises(LayoutParseError):
            parse_layout("polygon 0 0 1 1\n")

    def test_round_trip_is_identity(self):
        text = (
            "# comment\n"
            "rules 120 180 40 160\n"
            "bbox -500 -500 5000 5000\n"
            "rect poly 0 0 100 1000\n"
            "rect metal 0 0 3000 3000\n"
        )
        first = parse_layout(text)
        again = parse_layout(serialize_layout(first))
        assert again == first
        assert serialize_layout(again) == serialize_layout(first)


class TestCriticalFeatures:
    def test_strictly_below_threshold(self):
        rules = DesignRules(150, 200, 0, 100)
        narrow = Rect(0, 0, 100, 1000, FEATURE_LAYER, 0)
        exact = Rect(500, 0, 650, 1000, FEATURE_LAYER, 1)
        layout = Layout((narrow, exact), rules)
        assert find_critical_features(layout) == (narrow,)

    def test_square_counts_both_axes(self):
        rules = DesignRules(150, 200, 0, 100)
        square = Rect(0, 0, 100, 100, FEATURE_LAYER, 0)
        layout = Layout((square,), rules)
        assert find_critical_features(layout) == (square,)
        # tie-break: squares are treated as vertical, shifters left/right
        shifters = generate_shifters(layout)
        assert shifters[0].rect.x_hi <= square.x_lo
        assert shifters[1].rect.x_lo >= square.x_hi

    def test_non_feature_layers_ignored(self):
        rules = DesignRules(150, 200, 0, 100)
        layout = Layout((Rect(0, 0, 100, 1000, "metal", 0),), rules)
        assert find_critical_features(layout) == ()


class TestShifters:
    def test_vertical_feature_construction(self):
        rules = DesignRules(150, 200, 0, 100)
        layout = Layout((Rect(0, 0, 100, 1000, FEATURE_LAYER, 0),), rules)
        lo, hi = generate_shifters(layout)
        assert (lo.rect.x_lo, lo.rect.y_lo, lo.rect.x_hi, lo.rect.y_hi) == (-200, 0, 0, 1000)
        assert (hi.rect.x_lo, hi.rect.y_lo, hi.rect.x_hi, hi.rect.y_hi) == (100, 0, 300, 1000)
        assert (lo.side, hi.side) == (SIDE_LOW, SIDE_HIGH)
        assert lo.feature_id == hi.feature_id == 0

    def test_horizontal_feature_construction(self):
        rules = DesignRules(150, 200, 30, 100)
        layout = Layout((Rect(0, 0, 1000, 100, FEATURE_LAYER, 0),), rules)
        lo, hi = generate_shifters(layout)
        assert (lo.rect.y_lo, lo.rect.y_hi) == (-230, -30)
        assert (hi.rect.y_lo, hi.rect.y_hi) == (130, 330)
        assert lo.rect.x_lo == 0 and lo.rect.x_hi == 1000

    def test_no_critical_features_no_shifters(self):
        rules = DesignRules(100, 200, 0, 100)
        layout = Layout((Rect(0, 0, 500, 1000, FEATURE_LAYER, 0),), rules)
        assert generate_shifters(layout) == ()

    def test_close_parallel_features_both_emitted(self):
        # inner shifters geometrically overlap; both still exist
        rules = DesignRules(150, 200, 0, 100)
        layout = Layout(
            (
                Rect(0, 0, 100, 1000, FEATURE_LAYER, 0),
                Rect(200, 0, 300, 1000, FEATURE_LAYER, 1),
            ),
            rules,
        )
        shifters = generate_shifters(layout)
        assert len(shifters) == 4
        inner = [s for s in shifters if s.id in (1, 2)]
        assert inner[0].rect.interior_overlaps(inner[1].rect)

    def test_clipping_to_bbox(self):
        rules = DesignRules(150, 200, 0, 100)
        layout = Layout(
            (Rect(0, 0, 100, 1000, FEATURE_LAYER, 0),),
            rules,
            bbox=(-100, 0, 400, 1000),
        )
        lo, hi = generate_shifters(layout)
        assert lo.clipped and lo.rect.x_lo == -100
        assert not hi.clipped

    def test_fully_outside_bbox_is_error(self):
        rules = DesignRules(150, 300, 0, 100)
        layout = Layout(
            (Rect(0, 0, 100, 1000, FEATURE_LAYER, 0),),
            rules,
            bbox=(0, 0, 100, 1000),
        )
        with pytest.raises(LayoutValidationError):
            generate_shifters(layout)

    def test_deterministic(self):
        rules = DesignRules(150, 200, 10, 100)
        layout = Layout(
            (
                Rect(0, 0, 100, 1000, FEATURE_LAYER, 0),
                Rect(700, -200, 1700, -100, FEATURE_LAYER, 1),
            ),
            rules,
        )
        assert generate_shifters(layout) == generate_shifters(layout)


class TestSeparation:
    def test_aligned_gap(self):
        a = Rect(0, 0, 100, 1000)
        b = Rect(150, 0, 250, 1000, id=1)
        assert rect_separation(a, b) == 50

    def test_intersecting_is_zero(self):
        a = Rect(0, 0, 100, 100)
        b = Rect(50, 50, 150, 150, id=1)
        assert rect_separation(a, b) == 0

    def test_diagonal_euclidean_floor(self):
        a = Rect(0, 0, 100, 100)
        b = Rect(130, 140, 200, 200, id=1)
        # gaps 30, 40 -> hypotenuse 50
        assert rect_separation(a, b) == 50
        c = Rect(131, 140, 200, 200, id=2)
        assert rect_separation(a, c) == math.isqrt(31 * 31 + 40 * 40)

    @given(
        st.tuples(*[st.integers(-300, 300) for _ in range(4)]),
        st.tuples(*[st.integers(-300, 300) for _ in range(4)]),
    )
    def test_symmetric_and_nonnegative(self, raw_a, raw_b):
        ax, ay, aw, ah = raw_a
        bx, by, bw, bh = raw_b
        a = Rect(ax, ay, ax + abs(aw) + 1, ay + abs(ah) + 1)
        b = Rect(bx, by, bx + abs(bw) + 1, by + abs(bh) + 1, id=1)
        assert rect_separation(a, b) == rect_separation(b, a) >= 0


class TestOverlappingPairs:
    def _two_shifter_layout(self, gap: int, spacing: int):
        rules = DesignRules(150, 200, 0, spacing)
        pitch = 400 + gap  # inner shifter gap equals `gap`
        layout = Layout(
            (
                Rect(0, 0, 100, 1000, FEATURE_LAYER, 0),
                Rect(pitch + 100, 0, pitch + 200, 1000, FEATURE_LAYER, 1),
            ),
            rules,
        )
        shifters = generate_shifters(layout)
        return shifters, rules

    def test_pair_reported_with_separation(self):
        shifters, rules = self._two_shifter_layout(gap=50, spacing=100)
        pairs = find_overlapping_pairs(shifters, rules)
        assert pairs == ((1, 2, 50),)

    def test_boundary_is_strict(self):
        shifters, rules = self._two_shifter_layout(gap=100, spacing=100)
        assert find_overlapping_pairs(shifters, rules) == ()

    def test_same_feature_never_reported(self):
        rules = DesignRules(150, 200, 0, 10_000)
        layout = Layout((Rect(0, 0, 100, 1000, FEATURE_LAYER, 0),), rules)
        shifters = generate_shifters(layout)
        assert find_overlapping_pairs(shifters, rules) == ()

    def test_symmetric_sorted_deterministic(self):
        rng = random.Random(7)
        rules = DesignRules(150, 200, 10, 400)
        rects = []
        x = 0
        for i in range(5):
            rects.append(Rect(x, 0, x + 100, 800, FEATURE_LAYER, i))
            x += rng.choice((550, 600, 700))
        layout = Layout(tuple(rects), rules)
        shifters = generate_shifters(layout)
        pairs = find_overlapping_pairs(shifters, rules)
        assert pairs == tuple(sorted(pairs))
        assert all(a < b for a, b, _ in pairs)
        assert pairs == find_overlapping_pairs(shifters, rules)
