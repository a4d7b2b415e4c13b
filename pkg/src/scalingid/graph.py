"""Directed simple graphs with a distinguished input-output vertex 1.

Vertices are the integers ``1..n``. An edge ``(u, v)`` means ``u -> v``,
i.e. material flows from compartment ``u`` to compartment ``v``; in the
parameter matrix it occupies position ``(v, u)``.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property, lru_cache
from itertools import permutations
from typing import Iterable, Optional

from .errors import GraphError, NotStronglyConnected

Edge = tuple[int, int]


@dataclass(frozen=True)
class DirectedGraph:
    """Immutable simple digraph on vertices ``1..n``.

    ``edges`` may be given as any iterable of pairs; it is stored as a
    sorted tuple. Loops, duplicates and out-of-range labels raise
    :class:`GraphError`.
    """

    n: int
    edges: tuple[Edge, ...] = ()

    def __post_init__(self):
        if not isinstance(self.n, int) or self.n < 1:
            raise GraphError(f"vertex count must be a positive integer, got {self.n!r}")
        normalized = []
        for edge in self.edges:
            try:
                u, v = edge
                u, v = int(u), int(v)
            except (TypeError, ValueError):
                raise GraphError(f"edge {edge!r} is not a pair of vertex labels") from None
            if not (1 <= u <= self.n and 1 <= v <= self.n):
                raise GraphError(f"edge {u}->{v} uses a label outside 1..{self.n}")
            if u == v:
                raise GraphError(f"self-loop at vertex {u} is not allowed")
            normalized.append((u, v))
        edges = tuple(sorted(normalized))
        if len(set(edges)) != len(edges):
            dup = next(e for i, e in enumerate(edges[1:]) if e == edges[i])
            raise GraphError(f"duplicate edge {dup[0]}->{dup[1]}")
        object.__setattr__(self, "edges", edges)

    @property
    def m(self) -> int:
        return len(self.edges)

    @property
    def vertices(self) -> range:
        return range(1, self.n + 1)

    @cached_property
    def edge_set(self) -> frozenset[Edge]:
        return frozenset(self.edges)

    def has_edge(self, u: int, v: int) -> bool:
        return (u, v) in self.edge_set

    @cached_property
    def successors(self) -> dict[int, tuple[int, ...]]:
        out: dict[int, list[int]] = {v: [] for v in self.vertices}
        for u, v in self.edges:
            out[u].append(v)
        return {v: tuple(ws) for v, ws in out.items()}

    @cached_property
    def predecessors(self) -> dict[int, tuple[int, ...]]:
        inc: dict[int, list[int]] = {v: [] for v in self.vertices}
        for u, v in self.edges:
            inc[v].append(u)
        return {v: tuple(us) for v, us in inc.items()}

    @cached_property
    def out_masks(self) -> tuple[int, ...]:
        """``out_masks[v-1]`` has bit ``w-1`` set for every edge ``v -> w``."""
        masks = [0] * self.n
        for u, v in self.edges:
            masks[u - 1] |= 1 << (v - 1)
        return tuple(masks)

    @cached_property
    def in_masks(self) -> tuple[int, ...]:
        masks = [0] * self.n
        for u, v in self.edges:
            masks[v - 1] |= 1 << (u - 1)
        return tuple(masks)

    def without_edge(self, edge: Edge) -> "DirectedGraph":
        return DirectedGraph(self.n, [e for e in self.edges if e != edge])

    def to_dict(self) -> dict:
        return {"n": self.n, "edges": [list(e) for e in self.edges]}

    def __str__(self) -> str:
        arcs = ", ".join(f"{u}->{v}" for u, v in self.edges)
        return f"DirectedGraph(n={self.n}, {{{arcs}}})"


def _reach(masks: tuple[int, ...], start: int, within: int) -> int:
    """Bitmask of vertices reachable from bit ``start`` inside ``within``."""
    seen = start
    frontier = start
    while frontier:
        low = frontier & -frontier
        frontier ^= low
        nxt = masks[low.bit_length() - 1] & within & ~seen
        seen |= nxt
        frontier |= nxt
    return seen


def induced_strongly_connected(out_masks, in_masks, subset: int) -> bool:
    """Whether the subgraph induced on the vertex bitmask ``subset`` is strongly connected."""
    if not subset:
        return False
    root = subset & -subset
    return (
        _reach(out_masks, root, subset) == subset
        and _reach(in_masks, root, subset) == subset
    )


def is_strongly_connected(g: DirectedGraph) -> bool:
    """Forward and backward reachability from vertex 1 both cover all vertices."""
    full = (1 << g.n) - 1
    return induced_strongly_connected(g.out_masks, g.in_masks, full)


def require_strongly_connected(g: DirectedGraph) -> None:
    if not is_strongly_connected(g):
        raise NotStronglyConnected(g)


def exchanges(g: DirectedGraph) -> list[int]:
    """Vertices ``i >= 2`` with both ``1 -> i`` and ``i -> 1``."""
    return [i for i in range(2, g.n + 1) if g.has_edge(1, i) and g.has_edge(i, 1)]


def is_minimally_strongly_connected(g: DirectedGraph) -> bool:
    require_strongly_connected(g)
    full = (1 << g.n) - 1
    out_masks, in_masks = list(g.out_masks), list(g.in_masks)
    for u, v in g.edges:
        out_masks[u - 1] ^= 1 << (v - 1)
        in_masks[v - 1] ^= 1 << (u - 1)
        still = induced_strongly_connected(out_masks, in_masks, full)
        out_masks[u - 1] ^= 1 << (v - 1)
        in_masks[v - 1] ^= 1 << (u - 1)
        if still:
            return False
    return True


def is_inductively_strongly_connected(g: DirectedGraph) -> Optional[tuple[int, ...]]:
    """Find an ordering ``(1, v2, ..., vn)`` whose every prefix induces a
    strongly connected subgraph, or return ``None``.

    The ordering always starts at the input-output vertex 1.
    """
    require_strongly_connected(g)
    full = (1 << g.n) - 1
    out_masks, in_masks = g.out_masks, g.in_masks
    dead: set[int] = set()

    def extend(prefix: int, order: list[int]) -> bool:
        if prefix == full:
            return True
        if prefix in dead:
            return False
        for v in range(2, g.n + 1):
            bit = 1 << (v - 1)
            if prefix & bit:
                continue
            grown = prefix | bit
            if induced_strongly_connected(out_masks, in_masks, grown):
                order.append(v)
                if extend(grown, order):
                    return True
                order.pop()
        dead.add(prefix)
        return False

    order = [1]
    return tuple(order) if extend(1, order) else None


@lru_cache(maxsize=None)
def _arc_permutations(n: int) -> tuple[tuple[int, ...], ...]:
    """For every permutation of ``2..n`` (vertex 1 fixed), the induced map on
    arc bit positions ``(u-1)*n + (v-1)``."""
    table = []
    for tail in permutations(range(1, n)):
        perm = (0,) + tail
        table.append(tuple(perm[u] * n + perm[v] for u in range(n) for v in range(n)))
    return tuple(table)


def adjacency_code(n: int, edges: Iterable[Edge]) -> int:
    """Row-major adjacency bitstring, bit ``(u-1)*n + (v-1)`` per edge."""
    code = 0
    for u, v in edges:
        code |= 1 << ((u - 1) * n + (v - 1))
    return code


def canonical_code(n: int, code: int) -> int:
    """Minimum adjacency code over all relabelings fixing vertex 1."""
    bits = []
    while code:
        low = code & -code
        bits.append(low.bit_length() - 1)
        code ^= low
    best = None
    for table in _arc_permutations(n):
        c = 0
        for b in bits:
            c |= 1 << table[b]
        if best is None or c < best:
            best = c
    return best if best is not None else 0


def canonical_form(g: DirectedGraph) -> tuple[int, int]:
    """Orbit-minimum key under permutations of ``2..n``.

    Brute force over all ``(n-1)!`` relabelings, so intended for ``n <= 7``.
    """
    return g.n, canonical_code(g.n, adjacency_code(g.n, g.edges))


def graph_from_code(n: int, code: int) -> DirectedGraph:
    edges = []
    while code:
        low = code & -code
        b = low.bit_length() - 1
        edges.append((b // n + 1, b % n + 1))
        code ^= low
    return DirectedGraph(n, edges)


def relabel(g: DirectedGraph, mapping: dict[int, int]) -> DirectedGraph:
    """Apply a vertex bijection ``old -> new`` on ``1..n``."""
    return DirectedGraph(g.n, [(mapping[u], mapping[v]) for u, v in g.edges])
