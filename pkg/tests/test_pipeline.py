"""Whole-pipeline integration, including the crossing-heavy path."""

import pytest

from aapsm.bipartize import ORIGIN_PLANARIZATION
from aapsm.conflict_graph import is_bipartite
from aapsm.errors import UncorrectableConflictError
from aapsm.generator import generate_layout
from aapsm.layout import parse_layout
from aapsm.pipeline import correct, detect, render_report

TANGLED_ROW = """rules 150 100 0 501
bbox -1500 -1500 2500 2500
rect poly 0 0 100 800
rect poly 350 0 450 800
rect poly 700 0 800 800
"""


class TestCrossingHeavyPath:
    """Every shifter center sits on one horizontal line and outer shifters
    overlap across the middle wire, so node perturbation, crossing removal,
    and the post-planarization odd-cycle re-check all engage."""

    def test_detect_via_planarization_recheck(self):
        layout = parse_layout(TANGLED_ROW)
        res = detect(layout, run_greedy_baseline=True)
        assert res.graph.perturbed_nodes
        assert res.embedding.removed_edge_ids
        assert len(res.conflicts) > 0
        assert any(
            c.origin == ORIGIN_PLANARIZATION for c in res.conflicts.conflicts
        )
        assert is_bipartite(res.graph, frozenset(res.conflicts.edge_ids)).ok
        assert len(res.conflicts) >= len(res.optimal_edge_ids)

    def test_correction_still_converges(self):
        layout = parse_layout(TANGLED_ROW)
        res = detect(layout)
        cor = correct(res)
        assert cor.residual_conflicts == 0
        assert cor.uncovered == ()
        assert cor.area.pct_increase > 0


class TestReports:
    def test_report_keys_ordered_and_stable(self):
        layout = generate_layout(21, features=9, motif_density=0.6)
        a = render_report(detect(layout, run_greedy_baseline=True).report)
        b = render_report(detect(layout, run_greedy_baseline=True).report)
        assert a == b
        keys = [line.split("=", 1)[0] for line in a.strip().splitlines()]
        assert keys.index("polygons") < keys.index("conflicts_np") < keys.index(
            "conflicts_pcg"
        )

    def test_gadget_modes_timed_and_equal(self):
        layout = generate_layout(22, features=8, motif_density=1.0)
        res = detect(layout, time_gadget_modes=True)
        assert set(res.match_seconds) == {"generalized", "optimized"}
        report = dict(res.report)
        assert "match_time_generalized_s" in report
        assert "match_time_optimized_s" in report

    def test_timing_lines_absent_by_default(self):
        layout = generate_layout(23, features=6, motif_density=0.5)
        report = dict(detect(layout).report)
        assert not any(k.startswith("match_time") for k in report)


class TestRandomTangles:
    def test_correction_never_lies(self):
        """On arbitrary random tangles every run must end in one of: fully
        corrected (residual 0), honest uncovered listing, or a geometry
        rejection; never a silent residual."""
        import random

        from aapsm.errors import GeometryError
        from conftest import micro_layout

        rng = random.Random(246810)
        checked = 0
        while checked < 60:
            layout = micro_layout(rng, max_features=6)
            if layout is None:
                continue
            try:
                detection = detect(layout)
            except GeometryError:
                continue
            correction = correct(detection, allow_uncovered=True)
            if not correction.uncovered:
                assert correction.residual_conflicts == 0
            checked += 1


class TestCorrectErrors:
    def test_uncoverable_raises_with_listing(self):
        text = (
            "rules 150 200 0 500\n"
            "bbox -2000 -2000 4000 4000\n"
            "rect poly 0 0 100 800\n"
            "rect poly 250 0 350 800\n"
            "rect poly 500 0 600 800\n"
        )
        layout = parse_layout(text)
        res = detect(layout)
        with pytest.raises(UncorrectableConflictError) as err:
            correct(res)
        assert err.value.conflict_ids

    def test_allow_uncovered_mode_reports_rest(self):
        text = (
            "rules 150 200 0 500\n"
            "bbox -2000 -2000 4000 4000\n"
            "rect poly 0 0 100 800\n"
            "rect poly 250 0 350 800\n"
            "rect poly 500 0 600 800\n"
        )
        layout = parse_layout(text)
        res = detect(layout)
        cor = correct(res, allow_uncovered=True)
        assert cor.uncovered
