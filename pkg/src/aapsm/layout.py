"""Axis-aligned rectangle layout model with AAPSM design rules.

All coordinates are integers in database units (nm) and every geometric
predicate is exact; no floating point enters the model.  Drawn wires live on
the feature layer ("poly"); phase shifters are derived per critical feature
and kept outside the Layout proper so that regeneration is always a pure
function of the layout.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass

from .errors import LayoutParseError, LayoutValidationError

log = logging.getLogger(__name__)

FEATURE_LAYER = "poly"
SHIFTER_LAYER = "shifter"

SIDE_LOW = "low"
SIDE_HIGH = "high"


@dataclass(frozen=True)
class Rect:
    """Axis-aligned box [x_lo, x_hi] x [y_lo, y_hi], closed on all sides."""

    x_lo: int
    y_lo: int
    x_hi: int
    y_hi: int
    layer: str = FEATURE_LAYER
    id: int = 0

    def __post_init__(self):
        if not (self.x_lo < self.x_hi and self.y_lo < self.y_hi):
            raise LayoutValidationError(
                f"degenerate rect id={self.id} on layer {self.layer}: "
                f"({self.x_lo},{self.y_lo})-({self.x_hi},{self.y_hi})"
            )

    @property
    def width(self) -> int:
        return self.x_hi - self.x_lo

    @property
    def height(self) -> int:
        return self.y_hi - self.y_lo

    @property
    def short_dim(self) -> int:
        return min(self.width, self.height)

    @property
    def is_vertical(self) -> bool:
        """Long axis is y; squares count as vertical (deterministic tie-break)."""
        return self.height >= self.width

    def interior_overlaps(self, other: "Rect") -> bool:
        return (
            self.x_lo < other.x_hi
            and other.x_lo < self.x_hi
            and self.y_lo < other.y_hi
            and other.y_lo < self.y_hi
        )


def axis_gaps(a: Rect, b: Rect) -> tuple[int, int]:
    """Per-axis clearance between two rects; 0 where projections overlap or touch."""
    gx = max(0, a.x_lo - b.x_hi, b.x_lo - a.x_hi)
    gy = max(0, a.y_lo - b.y_hi, b.y_lo - a.y_hi)
    return gx, gy


def rect_separation(a: Rect, b: Rect) -> int:
    """Separation between two rects in nm.

    Per-axis gaps gx, gy (0 when the projections overlap); the separation is
    the nonzero gap when only one axis is open, and floor(sqrt(gx^2 + gy^2))
    when the rects are diagonal to each other.  Intersecting rects have
    separation 0.
    """
    gx, gy = axis_gaps(a, b)
    if gx == 0 or gy == 0:
        return max(gx, gy)
    return math.isqrt(gx * gx + gy * gy)


@dataclass(frozen=True)
class DesignRules:
    """Numeric design rules driving shifter generation and spacing checks."""

    critical_width: int
    shifter_width: int
    shifter_gap: int
    min_shifter_spacing: int

    def __post_init__(self):
        if self.critical_width <= 0:
            raise LayoutValidationError("critical_width must be > 0")
        if self.shifter_width <= 0:
            raise LayoutValidationError("shifter_width must be > 0")
        if self.shifter_gap < 0:
            raise LayoutValidationError("shifter_gap must be >= 0")
        if self.min_shifter_spacing <= 0:
            raise LayoutValidationError("min_shifter_spacing must be > 0")


DEFAULT_RULES = DesignRules(
    critical_width=150,
    shifter_width=200,
    shifter_gap=50,
    min_shifter_spacing=200,
)


@dataclass(frozen=True)
class Layout:
    """A bag of rectangles plus the rules that govern them.

    Feature-layer rects must be pairwise interior-disjoint; other layers are
    carried through untouched.
    """

    rects: tuple[Rect, ...]
    rules: DesignRules = DEFAULT_RULES
    bbox: tuple[int, int, int, int] | None = None

    def __post_init__(self):
        object.__setattr__(self, "rects", tuple(self.rects))
        ids = [r.id for r in self.rects]
        if len(ids) != len(set(ids)):
            raise LayoutValidationError("duplicate rect ids in layout")
        if self.bbox is not None:
            x_lo, y_lo, x_hi, y_hi = self.bbox
            if not (x_lo < x_hi and y_lo < y_hi):
                raise LayoutValidationError("degenerate bbox")
        feats = self.features
        for i, a in enumerate(feats):
            for b in feats[i + 1 :]:
                if a.interior_overlaps(b):
                    raise LayoutValidationError(
                        f"feature rects {a.id} and {b.id} overlap"
                    )

    @property
    def features(self) -> tuple[Rect, ...]:
        return tuple(r for r in self.rects if r.layer == FEATURE_LAYER)

    def bounding_box(self) -> tuple[int, int, int, int] | None:
        """Declared bbox, else the tight box over all rects."""
        if self.bbox is not None:
            return self.bbox
        if not self.rects:
            return None
        return (
            min(r.x_lo for r in self.rects),
            min(r.y_lo for r in self.rects),
            max(r.x_hi for r in self.rects),
            max(r.y_hi for r in self.rects),
        )


@dataclass(frozen=True)
class Shifter:
    """One phase shifter flanking a critical feature.

    `side` is low/high along the feature's short axis: left/right for vertical
    features, below/above for horizontal ones.
    """

    rect: Rect
    feature_id: int
    side: str
    id: int
    clipped: bool = False


def parse_layout(text: str) -> Layout:
    """Parse the line-oriented layout format.

    Records: ``rect <layer> <x_lo> <y_lo> <x_hi> <y_hi>``,
    ``rules <critical_width> <shifter_width> <shifter_gap> <min_spacing>``,
    ``bbox <x_lo> <y_lo> <x_hi> <y_hi>``; ``#`` starts a comment.
    """
    rects: list[Rect] = []
    rules = DEFAULT_RULES
    bbox = None
    next_id = 0
    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        kind = parts[0]
        try:
            if kind == "rect":
                if len(parts) != 6:
                    raise ValueError("expected: rect <layer> <x1> <y1> <x2> <y2>")
                layer = parts[1]
                x1, y1, x2, y2 = (int(p) for p in parts[2:])
                rects.append(Rect(x1, y1, x2, y2, layer, next_id))
                next_id += 1
            elif kind == "rules":
                if len(parts) != 5:
                    raise ValueError("expected: rules <cw> <sw> <gap> <min_spacing>")
                cw, sw, gap, ms = (int(p) for p in parts[1:])
                rules = DesignRules(cw, sw, gap, ms)
            elif kind == "bbox":
                if len(parts) != 5:
                    raise ValueError("expected: bbox <x1> <y1> <x2> <y2>")
                bbox = tuple(int(p) for p in parts[1:])
            else:
                raise ValueError(f"unknown record {kind!r}")
        except LayoutValidationError as exc:
            raise LayoutParseError(str(exc), line_no) from exc
        except ValueError as exc:
            raise LayoutParseError(str(exc), line_no) from exc
    return Layout(tuple(rects), rules, bbox)


def serialize_layout(layout: Layout) -> str:
    """Canonical text form; parse(serialize(parse(t))) == parse(t)."""
    lines = []
    r = layout.rules
    lines.append(
        f"rules {r.critical_width} {r.shifter_width} "
        f"{r.shifter_gap} {r.min_shifter_spacing}"
    )
    if layout.bbox is not None:
        lines.append("bbox {} {} {} {}".format(*layout.bbox))
    for rect in layout.rects:
        lines.append(
            f"rect {rect.layer} {rect.x_lo} {rect.y_lo} {rect.x_hi} {rect.y_hi}"
        )
    return "\n".join(lines) + "\n"


def find_critical_features(layout: Layout) -> tuple[Rect, ...]:
    """Feature-layer rects whose short-axis dimension is strictly below the
    critical width threshold."""
    cw = layout.rules.critical_width
    return tuple(r for r in layout.features if r.short_dim < cw)


def generate_shifters(layout: Layout) -> tuple[Shifter, ...]:
    """Two flanking shifters per critical feature.

    Shifters span the feature's full length at distance shifter_gap from its
    long sides, with zero line-end overhang.  Shifters falling outside a
    declared bbox are clipped (flagged and logged), never silently dropped.
    """
    rules = layout.rules
    gap, sw = rules.shifter_gap, rules.shifter_width
    out: list[Shifter] = []
    sid = 0
    for feat in find_critical_features(layout):
        if feat.is_vertical:
            lo_box = (feat.x_lo - gap - sw, feat.y_lo, feat.x_lo - gap, feat.y_hi)
            hi_box = (feat.x_hi + gap, feat.y_lo, feat.x_hi + gap + sw, feat.y_hi)
        else:
            lo_box = (feat.x_lo, feat.y_lo - gap - sw, feat.x_hi, feat.y_lo - gap)
            hi_box = (feat.x_lo, feat.y_hi + gap, feat.x_hi, feat.y_hi + gap + sw)
        for side, box in ((SIDE_LOW, lo_box), (SIDE_HIGH, hi_box)):
            rect, clipped = _clip_to_bbox(box, layout.bbox, sid, feat.id)
            out.append(Shifter(rect, feat.id, side, sid, clipped))
            sid += 1
    return tuple(out)


def _clip_to_bbox(box, bbox, sid: int, feature_id: int) -> tuple[Rect, bool]:
    x1, y1, x2, y2 = box
    clipped = False
    if bbox is not None:
        bx1, by1, bx2, by2 = bbox
        cx1, cy1 = max(x1, bx1), max(y1, by1)
        cx2, cy2 = min(x2, bx2), min(y2, by2)
        if (cx1, cy1, cx2, cy2) != (x1, y1, x2, y2):
            if cx1 >= cx2 or cy1 >= cy2:
                raise LayoutValidationError(
                    f"shifter {sid} of feature {feature_id} lies entirely "
                    "outside the layout bbox"
                )
            log.warning(
                "shifter %d of feature %d clipped to layout bbox", sid, feature_id
            )
            x1, y1, x2, y2 = cx1, cy1, cx2, cy2
            clipped = True
    return Rect(x1, y1, x2, y2, SHIFTER_LAYER, sid), clipped


def find_overlapping_pairs(
    shifters: tuple[Shifter, ...], rules: DesignRules
) -> tuple[tuple[int, int, int], ...]:
    """All unordered pairs of shifters from different features closer than the
    minimum shifter spacing, as (id_lo, id_hi, separation_nm).

    Pairs from the same feature are never reported: those two shifters are
    already bound to opposite phases.
    """
    spacing = rules.min_shifter_spacing
    ordered = sorted(shifters, key=lambda s: s.id)
    out = []
    for i, a in enumerate(ordered):
        for b in ordered[i + 1 :]:
            if a.feature_id == b.feature_id:
                continue
            sep = rect_separation(a.rect, b.rect)
            if sep < spacing:
                out.append((a.id, b.id, sep))
    return tuple(out)
