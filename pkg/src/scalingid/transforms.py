"""Graph constructions: exchanges, collapsing, subdivision, line segments,
gluing at a vertex, and the trivial-ear repair procedure."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from .ears import EarDecomposition, fewest_trivial_ears, validate
from .errors import NoExchangeWith, NoSuchEdge, OverlapViolation, UnknownVertex
from .graph import DirectedGraph, Edge, exchanges, require_strongly_connected
from .identifiability import RunConfig, decide


def add_exchange_vertex(g: DirectedGraph) -> DirectedGraph:
    """Attach a new input-output vertex by a 2-cycle to the old vertex 1.

    The new vertex is labeled 1 and every old vertex ``v`` becomes ``v + 1``.
    """
    edges = [(u + 1, v + 1) for u, v in g.edges] + [(1, 2), (2, 1)]
    return DirectedGraph(g.n + 1, edges)


@dataclass(frozen=True)
class Collapsed:
    """Result of identifying vertex 1 with an exchange partner.

    ``labels[v - 1]`` is the original label of new vertex ``v``;
    ``merged`` lists original edges that coincided with another edge after
    the identification and were merged.
    """

    graph: DirectedGraph
    labels: tuple[int, ...]
    merged: tuple[Edge, ...] = ()

    def original(self, v: int) -> int:
        return self.labels[v - 1]


def collapse_exchange(g: DirectedGraph, i: int) -> Collapsed:
    if i not in exchanges(g):
        raise NoExchangeWith(i)
    survivors = [v for v in g.vertices if v != i]
    new_label = {old: new for new, old in enumerate(survivors, start=1)}
    new_label[i] = 1
    edges: dict[Edge, Edge] = {}
    merged = []
    for u, v in g.edges:
        e = (new_label[u], new_label[v])
        if e[0] == e[1]:
            continue  # the exchange itself
        if e in edges:
            merged.append((u, v))
        else:
            edges[e] = (u, v)
    return Collapsed(DirectedGraph(len(survivors), edges), tuple(survivors), tuple(merged))


def subdivide_edge(g: DirectedGraph, edge: Edge) -> DirectedGraph:
    """Replace ``k -> l`` by ``k -> n+1 -> l``."""
    k, l = edge
    if not g.has_edge(k, l):
        raise NoSuchEdge(f"no edge {k}->{l}")
    w = g.n + 1
    return DirectedGraph(w, [e for e in g.edges if e != (k, l)] + [(k, w), (w, l)])


def add_line_segment(g: DirectedGraph, k: int, l: int, s: int) -> DirectedGraph:
    """Add the path ``k -> n+1 -> ... -> n+s -> l`` through ``s`` new vertices.
    ``k == l`` adds a cycle."""
    for v in (k, l):
        if v not in g.vertices:
            raise UnknownVertex(f"vertex {v} is not in 1..{g.n}")
    if s < 1:
        raise ValueError("a line segment needs at least one new vertex")
    path = [k] + list(range(g.n + 1, g.n + s + 1)) + [l]
    return DirectedGraph(g.n + s, list(g.edges) + list(zip(path, path[1:])))


def union_at_vertex(g1: DirectedGraph, g2: DirectedGraph, v: int) -> DirectedGraph:
    """Glue ``g2`` onto ``g1`` by identifying ``g2``'s vertex 1 with ``v``.

    ``g1`` keeps its labels (and its input-output vertex 1); vertex
    ``w >= 2`` of ``g2`` becomes ``g1.n + w - 1``.
    """
    if v not in g1.vertices:
        raise UnknownVertex(f"vertex {v} is not in 1..{g1.n}")

    def move(w: int) -> int:
        return v if w == 1 else g1.n + w - 1

    moved = [(move(a), move(b)) for a, b in g2.edges]
    overlap = g1.edge_set & set(moved)
    if overlap:
        raise OverlapViolation(f"edge sets collide on {sorted(overlap)}")
    return DirectedGraph(g1.n + g2.n - 1, list(g1.edges) + moved)


@dataclass(frozen=True)
class RepairResult:
    decomposition_used: EarDecomposition
    exhaustive: bool  # trivial-ear count proven minimal over decompositions with 1 in P0
    deleted_variant: DirectedGraph
    subdivided_variant: DirectedGraph
    # new vertex of the subdivided variant -> the edge it subdivides
    subdivision_map: dict[int, Edge]
    # nontrivial ear decompositions witnessing that each variant is YES
    deleted_decomposition: Optional[EarDecomposition] = None
    subdivided_decomposition: Optional[EarDecomposition] = None

    @property
    def trivial_count(self) -> int:
        return self.decomposition_used.trivial_count

    def to_dict(self) -> dict:
        return {
            "trivial_ears": [list(e) for e in self.decomposition_used.trivial_edges],
            "trivial_count": self.trivial_count,
            "minimal": self.exhaustive,
            "decomposition": self.decomposition_used.to_list(),
            "deleted_variant": self.deleted_variant.to_dict(),
            "subdivided_variant": self.subdivided_variant.to_dict(),
            "deleted_decomposition": self.deleted_decomposition.to_list(),
            "subdivided_decomposition": self.subdivided_decomposition.to_list(),
            "relabel": {
                "deleted": {str(v): v for v in self.deleted_variant.vertices},
                "subdivided": {str(w): list(e) for w, e in self.subdivision_map.items()},
            },
        }


def repair(g: DirectedGraph, config: Optional[RunConfig] = None, verify: bool = True) -> RepairResult:
    """Turn ``g`` into graphs with a nontrivial ear decomposition, either by
    deleting the trivial-ear edges or by subdividing each of them once.

    Starts from an ear decomposition with the fewest trivial ears found.
    With ``verify``, both variants are re-decided and must come out YES.
    """
    require_strongly_connected(g)
    plan = fewest_trivial_ears(g)
    ed = plan.decomposition
    validate(g, ed)
    trivial = ed.trivial_edges

    deleted = DirectedGraph(g.n, [e for e in g.edges if e not in trivial])
    subdivided = g
    subdivision_map = {}
    for e in trivial:
        subdivided = subdivide_edge(subdivided, e)
        subdivision_map[subdivided.n] = e

    kept = tuple(p for p, t in zip(ed.ears, ed.trivial_flags) if not t)
    through = {e: (e[0], w, e[1]) for w, e in subdivision_map.items()}
    deleted_ed = EarDecomposition(kept)
    subdivided_ed = EarDecomposition(kept + tuple(through[e] for e in trivial))
    validate(deleted, deleted_ed)
    validate(subdivided, subdivided_ed)
    assert deleted_ed.is_nontrivial and subdivided_ed.is_nontrivial

    result = RepairResult(ed, plan.exhaustive, deleted, subdivided, subdivision_map,
                          deleted_ed, subdivided_ed)
    if verify:
        config = config or RunConfig(seed=0)
        for variant in (deleted, subdivided):
            verdict = decide(variant, config)
            if not verdict.expected_dimension:
                raise AssertionError(f"repaired variant {variant} decided {verdict.certificate}")
    return result
