"""Ear decompositions of strongly connected digraphs.

An ear decomposition is a cycle ``P0`` followed by paths ``P1..Pt`` whose
endpoints lie on earlier ears and whose interior vertices are new. An ear
with a single edge is *trivial*. A decomposition is *nontrivial* when it
has no trivial ears and ``P0`` passes through vertex 1.

Every search here keeps the initial cycle through vertex 1. Nontrivial ears
only ever add edges incident to their new interior vertices, which makes
the set of covered vertices a sufficient search state.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Iterator, Optional

from .errors import GraphError
from .graph import DirectedGraph, Edge, require_strongly_connected

Path = tuple[int, ...]


@dataclass(frozen=True)
class EarDecomposition:
    """``ears[0]`` is a closed vertex sequence ``(1, ..., 1)``; the rest are paths."""

    ears: tuple[Path, ...]

    @property
    def trivial_flags(self) -> tuple[bool, ...]:
        return (False,) + tuple(len(p) == 2 for p in self.ears[1:])

    @property
    def trivial_count(self) -> int:
        return sum(self.trivial_flags)

    @property
    def trivial_edges(self) -> tuple[Edge, ...]:
        return tuple(p for p, t in zip(self.ears, self.trivial_flags) if t)

    @property
    def is_nontrivial(self) -> bool:
        return self.trivial_count == 0 and 1 in self.ears[0]

    def edges(self) -> list[Edge]:
        return [e for p in self.ears for e in zip(p, p[1:])]

    def to_list(self) -> list[list[int]]:
        return [list(p) for p in self.ears]

    def __len__(self) -> int:
        return len(self.ears)


def validate(g: DirectedGraph, ed: EarDecomposition) -> None:
    """Raise :class:`GraphError` unless ``ed`` is an ear decomposition of ``g``."""
    if not ed.ears:
        raise GraphError("empty ear decomposition")
    p0 = ed.ears[0]
    if len(p0) < 3 or p0[0] != p0[-1] or len(set(p0[:-1])) != len(p0) - 1:
        raise GraphError(f"initial ear {p0} is not a simple cycle")
    seen_vertices = set(p0)
    seen_edges: set[Edge] = set()
    for ear_index, path in enumerate(ed.ears):
        if ear_index:
            if len(path) < 2:
                raise GraphError(f"ear {path} has no edge")
            if path[0] not in seen_vertices or path[-1] not in seen_vertices:
                raise GraphError(f"ear {path} does not start and end on earlier ears")
            interior = path[1:-1]
            if len(set(interior)) != len(interior) or seen_vertices & set(interior):
                raise GraphError(f"ear {path} reuses a vertex in its interior")
            seen_vertices.update(interior)
        for e in zip(path, path[1:]):
            if not g.has_edge(*e):
                raise GraphError(f"ear {path} uses missing edge {e[0]}->{e[1]}")
            if e in seen_edges:
                raise GraphError(f"edge {e[0]}->{e[1]} appears in two ears")
            seen_edges.add(e)
    if seen_edges != g.edge_set or seen_vertices != set(g.vertices):
        raise GraphError("ears do not cover the graph")


def _bit(v: int) -> int:
    return 1 << (v - 1)


def _cycles_through_one(g: DirectedGraph) -> Iterator[Path]:
    """Simple cycles through vertex 1 as closed sequences, in DFS order."""
    succ = g.successors
    path = [1]
    on_path = {1}

    def dfs(x: int) -> Iterator[Path]:
        for w in succ[x]:
            if w == 1 and len(path) >= 2:
                yield tuple(path) + (1,)
            elif w not in on_path:
                path.append(w)
                on_path.add(w)
                yield from dfs(w)
                path.pop()
                on_path.discard(w)

    yield from dfs(1)


def _ears_from(g: DirectedGraph, covered: int) -> Iterator[Path]:
    """Paths ``v0 -> w1 -> ... -> vk`` with ``v0, vk`` covered and at least
    one interior vertex, all interior vertices uncovered."""
    succ = g.successors
    for v0 in g.vertices:
        if not covered & _bit(v0):
            continue
        path = [v0]
        used = 0

        def dfs(x: int) -> Iterator[Path]:
            nonlocal used
            for w in succ[x]:
                b = _bit(w)
                if covered & b:
                    if len(path) >= 2:
                        yield tuple(path) + (w,)
                elif not used & b:
                    path.append(w)
                    used |= b
                    yield from dfs(w)
                    path.pop()
                    used &= ~b

        yield from dfs(v0)


def _induced_edge_count(g: DirectedGraph, subset: int) -> int:
    return sum(bin(g.out_masks[u - 1] & subset).count("1") for u in g.vertices if subset & _bit(u))


def find_nontrivial_ear_decomposition(g: DirectedGraph) -> Optional[EarDecomposition]:
    """Exhaustive search for an ear decomposition without trivial ears whose
    initial cycle contains vertex 1. ``None`` proves that none exists.

    Worst case exponential; memoizes dead covered-vertex sets.
    """
    require_strongly_connected(g)
    full = (1 << g.n) - 1
    if g.n == 1:
        return None
    dead: set[int] = set()
    induced = {}

    def edges_within(subset: int) -> int:
        if subset not in induced:
            induced[subset] = _induced_edge_count(g, subset)
        return induced[subset]

    def extend(covered: int, ears: list[Path]) -> bool:
        if covered == full:
            return True
        if covered in dead:
            return False
        base = edges_within(covered)
        for ear in _ears_from(g, covered):
            grown = covered
            for v in ear[1:-1]:
                grown |= _bit(v)
            if grown in dead:
                continue
            # no edge other than the ear's own may appear among covered vertices
            if edges_within(grown) - base != len(ear) - 1:
                continue
            ears.append(ear)
            if extend(grown, ears):
                return True
            ears.pop()
        dead.add(covered)
        return False

    for cycle in _cycles_through_one(g):
        mask = 0
        for v in cycle:
            mask |= _bit(v)
        if edges_within(mask) != len(cycle) - 1 or mask in dead:
            continue
        ears = [cycle]
        if extend(mask, ears):
            return EarDecomposition(tuple(ears))
        dead.add(mask)
    return None


def _append_trivial(g: DirectedGraph, ears: list[Path]) -> EarDecomposition:
    used = {e for p in ears for e in zip(p, p[1:])}
    rest = [e for e in g.edges if e not in used]
    return EarDecomposition(tuple(ears) + tuple(rest))


def greedy_ear_decomposition(g: DirectedGraph) -> EarDecomposition:
    """Polynomial-time ear decomposition with ``P0`` through vertex 1.

    Grows the covered vertex set by shortest ears (fewest interior vertices
    first); leftover edges become trivial ears at the end.
    """
    require_strongly_connected(g)
    if g.n == 1:
        raise GraphError("a single vertex has no ear decomposition")
    cycle = _shortest_cycle_through_one(g)
    ears = [cycle]
    covered = set(cycle)
    while len(covered) < g.n:
        ear = _shortest_ear(g, covered)
        ears.append(ear)
        covered.update(ear[1:-1])
    return _append_trivial(g, ears)


def _shortest_cycle_through_one(g: DirectedGraph) -> Path:
    parent = {1: None}
    queue = deque([1])
    while queue:
        x = queue.popleft()
        for w in g.successors[x]:
            if w == 1:
                path = [x]
                while parent[path[-1]] is not None:
                    path.append(parent[path[-1]])
                return tuple(reversed(path)) + (1,)
            if w not in parent:
                parent[w] = x
                queue.append(w)
    raise GraphError("no cycle through vertex 1")


def _shortest_ear(g: DirectedGraph, covered: set[int]) -> Path:
    """BFS over uncovered vertices from all covered sources back to ``covered``."""
    parent: dict[int, Optional[int]] = {}
    queue = deque()
    for v0 in sorted(covered):
        for w in g.successors[v0]:
            if w not in covered and w not in parent:
                parent[w] = v0
                queue.append(w)
    while queue:
        x = queue.popleft()
        for w in g.successors[x]:
            if w in covered:
                path = [w, x]
                while path[-1] not in covered:
                    path.append(parent[path[-1]])
                return tuple(reversed(path))
            if w not in parent:
                parent[w] = x
                queue.append(w)
    raise GraphError("covered set has no ear; graph is not strongly connected")


@dataclass(frozen=True)
class EarPlan:
    decomposition: EarDecomposition
    exhaustive: bool  # True when the trivial-ear count is a proven minimum


def fewest_trivial_ears(g: DirectedGraph, budget: int = 200_000) -> EarPlan:
    """Ear decomposition (initial cycle through 1) with as few trivial ears as
    the search budget allows.

    Trivial ears can always be moved to the end, so the problem is to cover
    all vertices from a cycle through 1 with the largest number of
    nontrivial ears. Memoized over covered-vertex sets; when more than
    ``budget`` path extensions are needed, falls back to the greedy
    construction and reports ``exhaustive=False``.
    """
    require_strongly_connected(g)
    if g.n == 1:
        raise GraphError("a single vertex has no ear decomposition")
    full = (1 << g.n) - 1
    best: dict[int, tuple[int, Optional[Path]]] = {full: (0, None)}
    steps = 0

    class _OutOfBudget(Exception):
        pass

    def solve(covered: int) -> int:
        nonlocal steps
        if covered in best:
            return best[covered][0]
        top, top_ear = -1, None
        for ear in _ears_from(g, covered):
            steps += 1
            if steps > budget:
                raise _OutOfBudget
            grown = covered
            for v in ear[1:-1]:
                grown |= _bit(v)
            count = 1 + solve(grown)
            if count > top:
                top, top_ear = count, ear
        best[covered] = (top, top_ear)
        return top

    try:
        winner, winner_count = None, -1
        for cycle in _cycles_through_one(g):
            mask = 0
            for v in cycle:
                mask |= _bit(v)
            count = solve(mask)
            if count > winner_count:
                winner, winner_count = (cycle, mask), count
    except _OutOfBudget:
        return EarPlan(greedy_ear_decomposition(g), exhaustive=False)

    cycle, covered = winner
    ears = [cycle]
    while covered != full:
        ear = best[covered][1]
        ears.append(ear)
        for v in ear[1:-1]:
            covered |= _bit(v)
    return EarPlan(_append_trivial(g, ears), exhaustive=True)
