import random

import pytest

from scalingid.ears import (
    EarDecomposition,
    fewest_trivial_ears,
    find_nontrivial_ear_decomposition,
    greedy_ear_decomposition,
    validate,
)
from scalingid.errors import GraphError
from scalingid.graph import DirectedGraph, is_minimally_strongly_connected

from graphs import SUPPORT_PAIR, EXCHANGE6, THREE_CYCLE, random_strongly_connected


def _simple_paths(g, start):
    """All simple paths from ``start`` with at least one edge, plus the
    closed paths returning to ``start``."""
    stack = [(start,)]
    while stack:
        path = stack.pop()
        for w in g.successors[path[-1]]:
            if w == start:
                yield path + (w,)
            elif w not in path:
                yield path + (w,)
                stack.append(path + (w,))


def _ear_counts(g):
    """Brute force over all ear decompositions with 1 on the initial cycle:
    the set of achievable trivial-ear counts. No memoization, no pruning."""
    counts = set()

    def grow(covered, used, trivial):
        if len(used) == g.m:
            if len(covered) == g.n:
                counts.add(trivial)
            return
        for a in sorted(covered):
            for path in _simple_paths(g, a):
                if path[-1] not in covered:
                    continue
                inner = path[1:-1]
                if covered & set(inner):
                    continue
                edges = set(zip(path, path[1:]))
                if edges & used or (path[0] == path[-1] and not inner):
                    continue
                grow(covered | set(inner), used | edges, trivial + (len(path) == 2))

    for cycle in _simple_paths(g, 1):
        if cycle[-1] == 1:
            grow(set(cycle), set(zip(cycle, cycle[1:])), 0)
    return counts


def test_validate_accepts_and_rejects():
    g = DirectedGraph(3, [(1, 2), (2, 3), (3, 1), (3, 2)])
    validate(g, EarDecomposition(((1, 2, 3, 1), (3, 2))))
    with pytest.raises(GraphError):
        validate(g, EarDecomposition(((1, 2, 3, 1),)))  # 3->2 not covered
    with pytest.raises(GraphError):
        validate(g, EarDecomposition(((1, 2, 1),)))  # not a subgraph
    with pytest.raises(GraphError):
        validate(g, EarDecomposition(((1, 2, 3, 1), (3, 2), (3, 2))))


def test_cycle_has_nontrivial_decomposition():
    ed = find_nontrivial_ear_decomposition(THREE_CYCLE)
    assert ed.ears == ((1, 2, 3, 1),)
    assert ed.is_nontrivial


def test_known_graphs_have_none():
    assert find_nontrivial_ear_decomposition(SUPPORT_PAIR) is None
    # expected dimension without a nontrivial decomposition
    assert find_nontrivial_ear_decomposition(EXCHANGE6) is None


def test_search_matches_brute_force(census):
    for n in (3, 4):
        for r in census[n].records:
            g = r.graph
            counts = _ear_counts(g)
            ed = find_nontrivial_ear_decomposition(g)
            assert (ed is not None) == (0 in counts), g
            if ed is not None:
                validate(g, ed)
                assert ed.is_nontrivial
            plan = fewest_trivial_ears(g)
            validate(g, plan.decomposition)
            assert plan.exhaustive
            assert plan.decomposition.trivial_count == min(counts), g


def test_ear_count_is_cyclomatic(census):
    for r in census[4].records:
        g = r.graph
        for ed in (greedy_ear_decomposition(g), fewest_trivial_ears(g).decomposition):
            assert len(ed) == g.m - g.n + 1


def test_greedy_is_valid_on_random_graphs():
    rng = random.Random(11)
    for _ in range(200):
        g = random_strongly_connected(rng, rng.randint(2, 9), max_edges=30)
        ed = greedy_ear_decomposition(g)
        validate(g, ed)
        assert 1 in ed.ears[0]


def test_budget_exhaustion_falls_back_to_greedy():
    g = DirectedGraph(5, [(1, 2), (2, 3), (3, 4), (4, 5), (5, 1), (3, 1), (5, 3)])
    plan = fewest_trivial_ears(g, budget=1)
    assert not plan.exhaustive
    validate(g, plan.decomposition)


def test_msc_graphs_have_nontrivial_decompositions(census):
    for n in (3, 4, 5):
        for r in census[n].records:
            if is_minimally_strongly_connected(r.graph):
                assert find_nontrivial_ear_decomposition(r.graph) is not None


def test_single_vertex():
    assert find_nontrivial_ear_decomposition(DirectedGraph(1)) is None
    with pytest.raises(GraphError):
        greedy_ear_decomposition(DirectedGraph(1))
