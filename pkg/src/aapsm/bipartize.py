"""Conflict selection: optimal bipartization on the embedded graph, the
odd-cycle re-check of planarization casualties, and a greedy baseline.
"""

from __future__ import annotations

from dataclasses import dataclass

from .conflict_graph import PhaseConflictGraph, is_bipartite
from .errors import InternalInvariantError
from .planar import DualGraph, PlanarEmbedding
from .tjoin import MODE_GENERALIZED, solve_tjoin, tjoin_from_graph
from .unionfind import ParityUnionFind

ORIGIN_MATCHING = "matching"
ORIGIN_PLANARIZATION = "planarization-oddcheck"


@dataclass(frozen=True)
class Conflict:
    edge_id: int
    shifter_pair: tuple[int, int]
    required_separation: int | None  # None for feature edges
    origin: str
    weight: int


@dataclass(frozen=True)
class ConflictSet:
    conflicts: tuple[Conflict, ...]
    total_weight: int

    @property
    def edge_ids(self) -> tuple[int, ...]:
        return tuple(c.edge_id for c in self.conflicts)

    def __len__(self) -> int:
        return len(self.conflicts)


def bipartize_optimal(
    emb: PlanarEmbedding, dual: DualGraph, mode: str = MODE_GENERALIZED
) -> tuple[tuple[int, ...], int, float]:
    """Minimum-weight edge set M with the embedded graph minus M balanced.

    T-join on the dual with T = odd-degree faces; dual self-loops (bridges)
    are stripped first since a bridge lies on no cycle.  Returns (edge ids,
    weight, matching seconds).
    """
    usable = [(e.u, e.v, e.weight) for e in dual.edges if not e.is_self_loop]
    inst = tjoin_from_graph(range(dual.n_faces), usable)
    join, weight, seconds = solve_tjoin(inst, mode)

    primal_of = {}
    k = 0
    for e in dual.edges:
        if e.is_self_loop:
            continue
        primal_of[k] = e.primal_edge_id
        k += 1
    m_ids = tuple(sorted(primal_of[j] for j in join))

    removed = set(emb.removed_edge_ids) | set(m_ids)
    if not is_bipartite(emb.graph, frozenset(removed)).ok:
        raise InternalInvariantError(
            "embedded graph minus the bipartization set is still unbalanced"
        )
    return m_ids, weight, seconds


def finalize_conflicts(
    g: PhaseConflictGraph,
    planarization_removed: tuple[int, ...],
    bipartization_set: tuple[int, ...],
) -> ConflictSet:
    """Fold the planarization casualties back in.

    Edges dropped for crossings never saw the matching, so each is re-tested
    against a two-coloring of the surviving graph: consistent edges rejoin the
    graph, contradicting ones become conflicts.  Processing goes in edge-id
    order over a parity union-find, so an edge bridging two color components
    merges them instead of being charged as a conflict.
    """
    m_set = set(bipartization_set)
    p_set = set(planarization_removed)
    if m_set & p_set:
        raise InternalInvariantError("bipartization set intersects removed set")

    uf = ParityUnionFind()
    for n in g.nodes:
        uf.add(n.id)
    for e in g.edges:
        if e.id in m_set or e.id in p_set:
            continue
        if not uf.union(e.u, e.v, 0 if e.is_equal_constraint else 1):
            raise InternalInvariantError(
                "surviving embedded graph is not balanced before re-check"
            )

    conflicts: list[Conflict] = []
    for eid in sorted(m_set):
        e = g.edge(eid)
        conflicts.append(
            Conflict(eid, e.shifter_pair, e.required_separation, ORIGIN_MATCHING, e.weight)
        )
    for eid in sorted(p_set):
        e = g.edge(eid)
        rel = 0 if e.is_equal_constraint else 1
        if uf.union(e.u, e.v, rel):
            continue  # survives: its constraint holds under the coloring
        conflicts.append(
            Conflict(
                eid, e.shifter_pair, e.required_separation, ORIGIN_PLANARIZATION, e.weight
            )
        )

    conflicts.sort(key=lambda c: c.edge_id)
    result = ConflictSet(tuple(conflicts), sum(c.weight for c in conflicts))
    if not is_bipartite(g, frozenset(result.edge_ids)).ok:
        raise InternalInvariantError("graph minus final conflict set is unbalanced")
    return result


def bipartize_greedy(
    g: PhaseConflictGraph,
) -> tuple[tuple[int, ...], int, int]:
    """Greedy maximum-weight spanning forest baseline.

    Returns (deleted edge ids, literal leftover count, deleted weight).  The
    forest is grown heaviest-edge-first; leftover (non-forest) edges that close
    an unbalanced cycle are deleted.  The literal count additionally counts
    leftover edges whose cycle was already balanced, i.e. every non-forest
    edge.
    """
    uf = ParityUnionFind()
    for n in g.nodes:
        uf.add(n.id)
    deleted: list[int] = []
    leftover = 0
    ordered = sorted(g.edges, key=lambda e: (-e.weight, e.id))
    for e in ordered:
        rel = 0 if e.is_equal_constraint else 1
        if not uf.connected(e.u, e.v):
            uf.union(e.u, e.v, rel)
            continue
        leftover += 1
        if not uf.union(e.u, e.v, rel):
            deleted.append(e.id)
    deleted.sort()
    weight = sum(g.edge(eid).weight for eid in deleted)
    if not is_bipartite(g, frozenset(deleted)).ok:
        raise InternalInvariantError("greedy deletion left the graph unbalanced")
    return tuple(deleted), leftover, weight
