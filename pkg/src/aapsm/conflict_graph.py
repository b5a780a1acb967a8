"""Phase conflict graph over shifters and their overlap pairs.

Nodes are edge-shifter nodes (one per shifter, at the shifter rect center) and
overlap nodes (one per overlapping pair, at the midpoint between the two
shifter centers).  Edges either join the two shifters of one feature
(opposite-phase constraint) or join a shifter to an overlap node (same-phase
constraint, two halves per overlap pair).

Positions are stored in quarter-nm units (nm * 4) so that both rect centers
and overlap midpoints are exact integers.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

from . import geometry
from .errors import InternalInvariantError, LayoutValidationError
from .layout import DesignRules, Shifter
from .unionfind import ParityUnionFind

POS_SCALE = 4  # quarter-nm units per nm

NODE_EDGE_SHIFTER = "edge_shifter"
NODE_OVERLAP = "overlap"

EDGE_FEATURE = "feature"
EDGE_OVERLAP_HALF = "overlap_half"

# Deleting a feature edge would require widening the feature, which this flow
# never does; a large finite weight steers bipartization toward overlap edges
# while keeping matching weights bounded.
FEATURE_EDGE_WEIGHT = 10**6

WEIGHT_UNIFORM = "uniform"
WEIGHT_SEPARATION = "separation"

PHASE_A = 0
PHASE_B = 180

_PERTURB_LIMIT = 16


@dataclass(frozen=True)
class PcgNode:
    id: int
    kind: str
    x: int  # quarter-nm
    y: int
    shifter_id: int | None = None  # edge-shifter nodes
    pair: tuple[int, int] | None = None  # overlap nodes
    perturb: tuple[int, int] = (0, 0)

    @property
    def pos(self) -> tuple[int, int]:
        return (self.x, self.y)


@dataclass(frozen=True)
class PcgEdge:
    id: int
    u: int
    v: int
    weight: int
    kind: str
    shifter_pair: tuple[int, int]
    required_separation: int | None = None

    def other(self, node_id: int) -> int:
        return self.v if node_id == self.u else self.u

    @property
    def is_equal_constraint(self) -> bool:
        """Overlap halves demand equal phase; feature edges demand opposite."""
        return self.kind == EDGE_OVERLAP_HALF


@dataclass(frozen=True)
class PhaseConflictGraph:
    nodes: tuple[PcgNode, ...]
    edges: tuple[PcgEdge, ...]
    perturbed_nodes: tuple[int, ...] = ()

    def node(self, node_id: int) -> PcgNode:
        return self.nodes[node_id]

    def edge(self, edge_id: int) -> PcgEdge:
        return self.edges[edge_id]

    def adjacency(self, kept: set[int] | None = None) -> dict[int, list[PcgEdge]]:
        adj: dict[int, list[PcgEdge]] = {n.id: [] for n in self.nodes}
        for e in self.edges:
            if kept is not None and e.id not in kept:
                continue
            adj[e.u].append(e)
            adj[e.v].append(e)
        return adj


@dataclass(frozen=True)
class BipartiteResult:
    ok: bool
    coloring: dict[int, int] | None = None  # node id -> 0/1 when ok
    witness: tuple[int, ...] | None = None  # unbalanced cycle edge ids when not


def build_conflict_graph(
    shifters: tuple[Shifter, ...],
    overlap_pairs: tuple[tuple[int, int, int], ...],
    rules: DesignRules,
    weight_mode: str = WEIGHT_UNIFORM,
) -> PhaseConflictGraph:
    """Assemble the phase conflict graph from shifters and overlap pairs."""
    if weight_mode not in (WEIGHT_UNIFORM, WEIGHT_SEPARATION):
        raise ValueError(f"unknown weight mode {weight_mode!r}")
    ordered = sorted(shifters, key=lambda s: s.id)
    node_of_shifter: dict[int, int] = {}
    nodes: list[PcgNode] = []
    for s in ordered:
        nid = len(nodes)
        node_of_shifter[s.id] = nid
        x = 2 * (s.rect.x_lo + s.rect.x_hi)  # center * POS_SCALE, exact
        y = 2 * (s.rect.y_lo + s.rect.y_hi)
        nodes.append(PcgNode(nid, NODE_EDGE_SHIFTER, x, y, shifter_id=s.id))

    by_feature: dict[int, list[Shifter]] = {}
    for s in ordered:
        by_feature.setdefault(s.feature_id, []).append(s)

    edges: list[PcgEdge] = []
    for fid in sorted(by_feature):
        pair = by_feature[fid]
        if len(pair) != 2:
            raise LayoutValidationError(
                f"feature {fid} has {len(pair)} shifters, expected 2"
            )
        a, b = sorted(pair, key=lambda s: s.id)
        edges.append(
            PcgEdge(
                len(edges),
                node_of_shifter[a.id],
                node_of_shifter[b.id],
                FEATURE_EDGE_WEIGHT,
                EDGE_FEATURE,
                (a.id, b.id),
            )
        )

    spacing = rules.min_shifter_spacing
    for s1, s2, sep in sorted(overlap_pairs):
        required = spacing - sep
        if required <= 0:
            raise LayoutValidationError(
                f"overlap pair ({s1},{s2}) separation {sep} is not below "
                f"the minimum spacing {spacing}"
            )
        u = node_of_shifter[s1]
        v = node_of_shifter[s2]
        onid = len(nodes)
        ox = (nodes[u].x + nodes[v].x) // 2  # node coords are even: exact
        oy = (nodes[u].y + nodes[v].y) // 2
        nodes.append(PcgNode(onid, NODE_OVERLAP, ox, oy, pair=(s1, s2)))
        weight = 1 if weight_mode == WEIGHT_UNIFORM else required
        edges.append(
            PcgEdge(len(edges), u, onid, weight, EDGE_OVERLAP_HALF, (s1, s2), required)
        )
        edges.append(
            PcgEdge(len(edges), onid, v, weight, EDGE_OVERLAP_HALF, (s1, s2), required)
        )

    nodes, perturbed = _perturb_degenerate_overlaps(nodes, edges)
    return PhaseConflictGraph(tuple(nodes), tuple(edges), tuple(perturbed))


def _perturb_degenerate_overlaps(
    nodes: list[PcgNode], edges: list[PcgEdge]
) -> tuple[list[PcgNode], list[int]]:
    """Nudge overlap nodes off degenerate positions.

    An overlap node's placement is a modeling convenience, so it may be moved
    by a few quarter-nm when it coincides with another node or when one of its
    incident segments overlaps another segment along a collinear stretch of
    positive length (either situation breaks the rotation system or fabricates
    crossings).  Edge-shifter positions are fixed by the layout and never move.
    """
    perturbed: list[int] = []
    for _sweep in range(3):
        changed = False
        for node in nodes:
            if node.kind != NODE_OVERLAP:
                continue
            if not _is_degenerate(node.id, nodes, edges):
                continue
            base_x = node.x - node.perturb[0]
            base_y = node.y - node.perturb[1]
            fixed = False
            for dx, dy in _perturb_deltas():
                trial = replace(node, x=base_x + dx, y=base_y + dy, perturb=(dx, dy))
                nodes[node.id] = trial
                if not _is_degenerate(node.id, nodes, edges):
                    fixed = True
                    break
            if not fixed:
                raise InternalInvariantError(
                    f"cannot resolve degenerate overlap node {node.id} "
                    f"within {_PERTURB_LIMIT} quarter-nm"
                )
            if node.id not in perturbed:
                perturbed.append(node.id)
            changed = True
        if not changed:
            return nodes, perturbed
    # one extra verification sweep
    for node in nodes:
        if node.kind == NODE_OVERLAP and _is_degenerate(node.id, nodes, edges):
            raise InternalInvariantError(
                f"overlap node {node.id} still degenerate after perturbation sweeps"
            )
    return nodes, perturbed


def _perturb_deltas():
    for k in range(1, _PERTURB_LIMIT + 1):
        yield (0, k)
    for k in range(1, _PERTURB_LIMIT + 1):
        yield (k, _PERTURB_LIMIT)


def _is_degenerate(node_id: int, nodes: list[PcgNode], edges: list[PcgEdge]) -> bool:
    pos = nodes[node_id].pos
    for other in nodes:
        if other.id != node_id and other.pos == pos:
            return True
    mine = [e for e in edges if node_id in (e.u, e.v)]
    for e in mine:
        a, b = nodes[e.u].pos, nodes[e.v].pos
        for f in edges:
            if f.id == e.id:
                continue
            c, d = nodes[f.u].pos, nodes[f.v].pos
            if geometry.collinear_overlap(a, b, c, d):
                return True
    return False


def is_bipartite(
    g: PhaseConflictGraph, removed_edge_ids: tuple[int, ...] | frozenset = ()
) -> BipartiteResult:
    """Decide whether the graph minus the removed edges is phase-assignable.

    Two detectors run on every call: structural two-coloring (every edge read
    as "endpoints differ") and signed balance (overlap halves read as equal,
    feature edges as unequal).  They must agree on every conflict graph; a
    disagreement is a bug and raises.
    """
    removed = set(removed_edge_ids)
    kept = [e for e in g.edges if e.id not in removed]

    structural_ok = _structural_bipartite(g, kept)
    signed = _signed_balance(g, kept)

    if structural_ok != signed.ok:
        raise InternalInvariantError(
            "structural bipartiteness and signed balance disagree "
            f"(structural={structural_ok}, signed={signed.ok})"
        )
    return signed


def _structural_bipartite(g: PhaseConflictGraph, kept: list[PcgEdge]) -> bool:
    adj: dict[int, list[tuple[int, int]]] = {n.id: [] for n in g.nodes}
    for e in kept:
        adj[e.u].append((e.v, e.id))
        adj[e.v].append((e.u, e.id))
    color: dict[int, int] = {}
    for start in sorted(adj):
        if start in color:
            continue
        color[start] = 0
        queue = [start]
        while queue:
            u = queue.pop()
            for v, _eid in sorted(adj[u]):
                if v not in color:
                    color[v] = color[u] ^ 1
                    queue.append(v)
                elif color[v] == color[u]:
                    return False
    return True


def _signed_balance(g: PhaseConflictGraph, kept: list[PcgEdge]) -> BipartiteResult:
    adj: dict[int, list[PcgEdge]] = {n.id: [] for n in g.nodes}
    for e in kept:
        adj[e.u].append(e)
        adj[e.v].append(e)
    color: dict[int, int] = {}
    parent: dict[int, tuple[int, int] | None] = {}  # node -> (parent node, edge id)
    for start in sorted(adj):
        if start in color:
            continue
        color[start] = 0
        parent[start] = None
        stack = [start]
        while stack:
            u = stack.pop()
            for e in sorted(adj[u], key=lambda e: e.id):
                v = e.other(u)
                want = color[u] ^ (0 if e.is_equal_constraint else 1)
                if v not in color:
                    color[v] = want
                    parent[v] = (u, e.id)
                    stack.append(v)
                elif color[v] != want:
                    witness = _cycle_witness(u, v, e.id, parent)
                    return BipartiteResult(False, None, witness)
    return BipartiteResult(True, color, None)


def _cycle_witness(
    u: int, v: int, closing_edge: int, parent: dict[int, tuple[int, int] | None]
) -> tuple[int, ...]:
    def path_to_root(x: int) -> list[tuple[int, int]]:
        out = []
        while parent[x] is not None:
            p, eid = parent[x]
            out.append((x, eid))
            x = p
        return out

    pu = path_to_root(u)
    pv = path_to_root(v)
    eu = {eid for _, eid in pu}
    ev = {eid for _, eid in pv}
    cycle = sorted((eu ^ ev) | {closing_edge})
    return tuple(cycle)


def phase_assign(
    g: PhaseConflictGraph, deleted_edge_ids: tuple[int, ...] | frozenset = ()
) -> dict[int, int]:
    """Assign 0/180 phases to every node so all surviving constraints hold.

    Overlap nodes carry the phase shared by their pair.  The lowest node id of
    each connected component gets phase 0 (canonical polarity).  Raises when a
    surviving unbalanced cycle makes assignment impossible.
    """
    deleted = set(deleted_edge_ids)
    uf = ParityUnionFind()
    for n in g.nodes:
        uf.add(n.id)
    for e in g.edges:
        if e.id in deleted:
            continue
        rel = 0 if e.is_equal_constraint else 1
        if not uf.union(e.u, e.v, rel):
            raise InternalInvariantError(
                f"residual unbalanced cycle through edge {e.id}; "
                "cannot assign phases"
            )
    anchor_parity: dict[int, int] = {}
    phases: dict[int, int] = {}
    for n in sorted(g.nodes, key=lambda n: n.id):
        root, parity = uf.find(n.id)
        if root not in anchor_parity:
            anchor_parity[root] = parity  # first (lowest) node of the component
        phases[n.id] = PHASE_A if parity == anchor_parity[root] else PHASE_B
    for e in g.edges:
        if e.id in deleted:
            continue
        same = phases[e.u] == phases[e.v]
        if e.is_equal_constraint != same:
            raise InternalInvariantError(f"edge {e.id} constraint violated")
    return phases


def dump_graph(g: PhaseConflictGraph) -> str:
    """Line format: `node <id> <kind> <x> <y>` / `edge <id> <u> <v> <weight>
    <kind> <s1> <s2> [required_separation]`."""
    lines = []
    for n in g.nodes:
        lines.append(f"node {n.id} {n.kind} {n.x} {n.y}")
    for e in g.edges:
        s1, s2 = e.shifter_pair
        line = f"edge {e.id} {e.u} {e.v} {e.weight} {e.kind} {s1} {s2}"
        if e.required_separation is not None:
            line += f" {e.required_separation}"
        lines.append(line)
    return "\n".join(lines) + "\n"
