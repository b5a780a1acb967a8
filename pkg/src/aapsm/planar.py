"""Geometric planarization of the conflict graph, faces, and the dual graph.

The drawing is fixed by the layout (node positions are data, not layout
freedom), so planarization means deleting a cheap set of edges until no two
surviving closed segments intersect, then reading the rotation system off the
geometry and tracing faces.
"""

from __future__ import annotations

import functools
from collections import Counter
from dataclasses import dataclass

from . import geometry
from .conflict_graph import PcgEdge, PhaseConflictGraph
from .errors import GeometryError, InternalInvariantError
from .unionfind import ParityUnionFind

HalfEdge = tuple[int, int]  # (tail node id, edge id)


@dataclass(frozen=True)
class PlanarEmbedding:
    graph: PhaseConflictGraph
    kept_edge_ids: tuple[int, ...]
    removed_edge_ids: tuple[int, ...]  # the potential-conflict set P
    rotation: dict[int, tuple[int, ...]]  # node -> incident edge ids, CCW
    faces: tuple[tuple[HalfEdge, ...], ...]
    face_of: dict[HalfEdge, int]
    outer_faces: frozenset[int]
    face_component: tuple[int, ...]  # face index -> component label

    def kept_edges(self) -> list[PcgEdge]:
        return [self.graph.edge(eid) for eid in self.kept_edge_ids]


@dataclass(frozen=True)
class DualEdge:
    id: int
    u: int  # face index
    v: int
    weight: int
    primal_edge_id: int

    @property
    def is_self_loop(self) -> bool:
        return self.u == self.v


@dataclass(frozen=True)
class DualGraph:
    n_faces: int
    edges: tuple[DualEdge, ...]

    def degrees(self) -> list[int]:
        deg = [0] * self.n_faces
        for e in self.edges:
            deg[e.u] += 1
            deg[e.v] += 1  # self-loops count twice
        return deg


def find_crossings(
    g: PhaseConflictGraph, edge_ids: tuple[int, ...] | None = None
) -> tuple[tuple[int, int], ...]:
    """All pairs of non-adjacent edges whose closed segments intersect.

    Edges sharing an endpoint are never reported.  Raises GeometryError when
    two distinct nodes sit at the same position (no usable drawing exists).
    """
    seen: dict[tuple[int, int], int] = {}
    for n in g.nodes:
        if n.pos in seen:
            raise GeometryError(
                f"nodes {seen[n.pos]} and {n.id} share position {n.pos}"
            )
        seen[n.pos] = n.id

    edges = [g.edge(eid) for eid in (edge_ids if edge_ids is not None else range(len(g.edges)))]
    segs = []
    for e in edges:
        a, b = g.node(e.u).pos, g.node(e.v).pos
        box = (min(a[0], b[0]), min(a[1], b[1]), max(a[0], b[0]), max(a[1], b[1]))
        segs.append((e, a, b, box))

    out = []
    for i, (e1, a, b, box1) in enumerate(segs):
        for e2, c, d, box2 in segs[i + 1 :]:
            if {e1.u, e1.v} & {e2.u, e2.v}:
                continue
            if box1[2] < box2[0] or box2[2] < box1[0]:
                continue
            if box1[3] < box2[1] or box2[3] < box1[1]:
                continue
            if geometry.segments_intersect(a, b, c, d):
                out.append((e1.id, e2.id))
    return tuple(sorted(out))


def _adjacent_collinear_pairs(g: PhaseConflictGraph) -> list[tuple[int, int]]:
    """Edge pairs sharing a node and overlapping along a positive-length
    collinear stretch.  find_crossings excludes adjacent pairs, but no
    rotation system exists while these survive, so planarization must treat
    them as crossings too."""
    out = []
    n_edges = len(g.edges)
    for i in range(n_edges):
        e1 = g.edge(i)
        a, b = g.node(e1.u).pos, g.node(e1.v).pos
        for j in range(i + 1, n_edges):
            e2 = g.edge(j)
            if not {e1.u, e1.v} & {e2.u, e2.v}:
                continue
            c, d = g.node(e2.u).pos, g.node(e2.v).pos
            if geometry.collinear_overlap(a, b, c, d):
                out.append((i, j))
    return out


def planarize(g: PhaseConflictGraph) -> PlanarEmbedding:
    """Delete crossing edges greedily, then embed the survivors.

    Iterated greedy: while any crossing remains, delete the minimum-weight
    edge participating in one (ties: most crossings, then lowest edge id).
    Adjacent collinear overlaps are folded into the crossing set: they are not
    reported by find_crossings but equally admit no rotation system.
    """
    crossings = list(find_crossings(g)) + _adjacent_collinear_pairs(g)
    removed: list[int] = []
    while crossings:
        count: Counter[int] = Counter()
        for a, b in crossings:
            count[a] += 1
            count[b] += 1
        victim = min(count, key=lambda eid: (g.edge(eid).weight, -count[eid], eid))
        removed.append(victim)
        crossings = [c for c in crossings if victim not in c]
    kept = tuple(eid for eid in range(len(g.edges)) if eid not in set(removed))
    rotation = _build_rotation(g, kept)
    faces, face_of = _trace_faces(g, rotation)
    outer, face_comp = _classify_faces(g, kept, faces)
    _euler_check(g, kept, faces, face_comp)
    return PlanarEmbedding(
        g, kept, tuple(sorted(removed)), rotation, faces, face_of, outer, face_comp
    )


def _build_rotation(
    g: PhaseConflictGraph, kept: tuple[int, ...]
) -> dict[int, tuple[int, ...]]:
    incident: dict[int, list[int]] = {}
    for eid in kept:
        e = g.edge(eid)
        incident.setdefault(e.u, []).append(eid)
        incident.setdefault(e.v, []).append(eid)

    rotation: dict[int, tuple[int, ...]] = {}
    for node_id in sorted(incident):
        origin = g.node(node_id).pos

        def direction(eid: int) -> tuple[int, int]:
            e = g.edge(eid)
            other = g.node(e.other(node_id)).pos
            return (other[0] - origin[0], other[1] - origin[1])

        def cmp(e1: int, e2: int) -> int:
            c = geometry.compare_directions(direction(e1), direction(e2))
            if c == 0:
                raise InternalInvariantError(
                    f"edges {e1} and {e2} leave node {node_id} in the exact "
                    "same direction; rotation system undefined"
                )
            return c

        rotation[node_id] = tuple(sorted(incident[node_id], key=functools.cmp_to_key(cmp)))
    return rotation


def _trace_faces(g: PhaseConflictGraph, rotation: dict[int, tuple[int, ...]]):
    """Walk half-edges: arriving at v along e, leave on the CCW successor of e
    in v's rotation.  Interior faces come out counterclockwise."""
    next_pos: dict[int, dict[int, int]] = {
        v: {eid: i for i, eid in enumerate(rot)} for v, rot in rotation.items()
    }
    faces: list[tuple[HalfEdge, ...]] = []
    face_of: dict[HalfEdge, int] = {}
    all_half_edges = sorted(
        (v, eid) for v, rot in rotation.items() for eid in rot
    )
    for start in all_half_edges:
        if start in face_of:
            continue
        walk: list[HalfEdge] = []
        cur = start
        while True:
            if cur in face_of:
                raise InternalInvariantError("face walk re-entered a closed face")
            face_of[cur] = len(faces)
            walk.append(cur)
            tail, eid = cur
            head = g.edge(eid).other(tail)
            rot = rotation[head]
            idx = next_pos[head][eid]
            nxt_edge = rot[(idx + 1) % len(rot)]
            cur = (head, nxt_edge)
            if cur == start:
                break
        faces.append(tuple(walk))
    return tuple(faces), face_of


def _face_twice_area(g: PhaseConflictGraph, face: tuple[HalfEdge, ...]) -> int:
    total = 0
    for tail, eid in face:
        head = g.edge(eid).other(tail)
        (x1, y1), (x2, y2) = g.node(tail).pos, g.node(head).pos
        total += x1 * y2 - x2 * y1
    return total


def _classify_faces(g, kept, faces):
    uf = ParityUnionFind()
    for eid in kept:
        e = g.edge(eid)
        uf.union(e.u, e.v, 0)
    face_comp = []
    for face in faces:
        tail = face[0][0]
        face_comp.append(uf.find(tail)[0])
    outer: set[int] = set()
    by_comp: dict[int, list[int]] = {}
    for idx, comp in enumerate(face_comp):
        by_comp.setdefault(comp, []).append(idx)
    for comp, members in by_comp.items():
        members.sort()
        outer.add(min(members, key=lambda i: (_face_twice_area(g, faces[i]), i)))
    return frozenset(outer), tuple(face_comp)


def _euler_check(g, kept, faces, face_comp):
    uf = ParityUnionFind()
    nodes = set()
    for eid in kept:
        e = g.edge(eid)
        uf.union(e.u, e.v, 0)
        nodes.update((e.u, e.v))
    v_count: Counter = Counter()
    e_count: Counter = Counter()
    f_count: Counter = Counter()
    for n in nodes:
        v_count[uf.find(n)[0]] += 1
    for eid in kept:
        e_count[uf.find(g.edge(eid).u)[0]] += 1
    for comp in face_comp:
        f_count[comp] += 1
    for comp in v_count:
        v, e, f = v_count[comp], e_count[comp], f_count[comp]
        if v - e + f != 2:
            raise InternalInvariantError(
                f"Euler check failed on component {comp}: V={v} E={e} F={f}"
            )


def build_dual(emb: PlanarEmbedding) -> DualGraph:
    """One dual node per face, one dual edge per surviving primal edge.

    Bridges produce dual self-loops (flagged via is_self_loop); weights are
    copied from the primal edges.
    """
    g = emb.graph
    edges: list[DualEdge] = []
    for k, eid in enumerate(emb.kept_edge_ids):
        e = g.edge(eid)
        f1 = emb.face_of[(e.u, eid)]
        f2 = emb.face_of[(e.v, eid)]
        edges.append(DualEdge(k, f1, f2, e.weight, eid))
    dual = DualGraph(len(emb.faces), tuple(edges))
    if len(dual.edges) != len(emb.kept_edge_ids):
        raise InternalInvariantError("dual edge count mismatch")
    boundary_len = [len(f) for f in emb.faces]
    if dual.degrees() != boundary_len:
        raise InternalInvariantError(
            "dual degrees do not match face boundary lengths"
        )
    return dual


def dump_embedding(emb: PlanarEmbedding) -> str:
    """One face per line as the cycle of tail node ids."""
    lines = []
    for face in emb.faces:
        lines.append("face " + " ".join(str(tail) for tail, _ in face))
    lines.append("removed " + " ".join(str(e) for e in emb.removed_edge_ids))
    return "\n".join(lines) + "\n"
