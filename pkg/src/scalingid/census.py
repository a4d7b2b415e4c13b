"""Exhaustive census of strongly connected graphs with at most ``2n - 2``
edges, up to relabelings fixing vertex 1, and their classification.

Two independent enumerators are provided. :func:`enumerate_by_subsets`
scans every arc subset with ``n <= m <= 2n - 2`` (a strongly connected graph
on ``n >= 2`` vertices needs every out-degree >= 1, hence ``m >= n``).
:func:`enumerate_by_ears` grows graphs by single edges and by ears with
fresh interior vertices; it is what makes ``n = 6`` affordable.
"""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass, field
from functools import lru_cache
from itertools import combinations
from typing import Iterable, Optional

import numpy as np

from .ears import find_nontrivial_ear_decomposition
from .errors import UnsupportedSize
from .graph import (
    DirectedGraph,
    _arc_permutations,
    graph_from_code,
    induced_strongly_connected,
    is_inductively_strongly_connected,
    is_minimally_strongly_connected,
)
from .identifiability import RunConfig, decide

MIN_N = 2
MAX_N = 6
CSV_HEADER = ("n", "G", "G_star", "G_c", "G_ISC", "G_MSC")


def _check_size(n: int) -> None:
    if not MIN_N <= n <= MAX_N:
        raise UnsupportedSize(f"census supports {MIN_N} <= n <= {MAX_N}, got n={n}")


def _arcs(n: int) -> list[tuple[int, int]]:
    return [(u, v) for u in range(1, n + 1) for v in range(1, n + 1) if u != v]


def canonical_codes(n: int, codes) -> np.ndarray:
    """Vectorized :func:`graph.canonical_code` over an array of adjacency codes."""
    codes = np.asarray(codes, dtype=np.uint64)
    if codes.size == 0:
        return codes
    arc_bits = [(u - 1) * n + (v - 1) for u, v in _arcs(n)]
    present = {b: (codes >> np.uint64(b)) & np.uint64(1) for b in arc_bits}
    best = None
    for table in _arc_permutations(n):
        image = np.zeros_like(codes)
        for b in arc_bits:
            image |= present[b] << np.uint64(table[b])
        best = image if best is None else np.minimum(best, image)
    return best


def _sorted_representatives(n: int, codes: np.ndarray) -> list[DirectedGraph]:
    graphs = [graph_from_code(n, int(c)) for c in np.unique(codes)]
    return sorted(graphs, key=lambda g: (g.m, g.edges))


def enumerate_by_subsets(n: int) -> list[DirectedGraph]:
    """Brute force over arc subsets of size ``n..2n-2``."""
    _check_size(n)
    arcs = _arcs(n)
    full = (1 << n) - 1
    found = []
    for m in range(n, 2 * n - 1):
        for subset in combinations(range(len(arcs)), m):
            out = [0] * n
            inn = [0] * n
            for a in subset:
                u, v = arcs[a]
                out[u - 1] |= 1 << (v - 1)
                inn[v - 1] |= 1 << (u - 1)
            if 0 in out or 0 in inn:
                continue
            if induced_strongly_connected(out, inn, full):
                found.append(sum(1 << ((u - 1) * n + (v - 1)) for u, v in (arcs[a] for a in subset)))
    return _sorted_representatives(n, canonical_codes(n, found))


@lru_cache(maxsize=None)
def _strongly_connected_orbits(n: int, m: int) -> tuple[int, ...]:
    """Canonical codes of all strongly connected graphs with exactly ``n``
    vertices and ``m`` edges (no edge bound), built from smaller ones.

    A graph either has an edge whose removal keeps it strongly connected,
    or it is minimally strongly connected; then every ear decomposition
    starting with a cycle through 1 has only nontrivial ears, and removing
    the interior of the last ear leaves a smaller strongly connected graph.
    """
    if n == 1:
        return (0,) if m == 0 else ()
    if m < n or m > n * (n - 1):
        return ()
    candidates = []
    for code in _strongly_connected_orbits(n, m - 1):
        for u, v in _arcs(n):
            bit = 1 << ((u - 1) * n + (v - 1))
            if not code & bit:
                candidates.append(code | bit)
    for k in range(1, n):
        base_n = n - k
        for code in _strongly_connected_orbits(base_n, m - k - 1):
            base = graph_from_code(base_n, code)
            widened = [((u - 1) * n + (v - 1)) for u, v in base.edges]
            start = sum(1 << b for b in widened)
            fresh = list(range(base_n + 1, n + 1))
            # a == b closes a cycle through a
            for a in range(1, base_n + 1):
                for b in range(1, base_n + 1):
                    path = [a] + fresh + [b]
                    candidates.append(
                        start | sum(1 << ((x - 1) * n + (y - 1)) for x, y in zip(path, path[1:]))
                    )
    return tuple(int(c) for c in np.unique(canonical_codes(n, candidates)))


def strongly_connected_graphs(n: int, m: int) -> list[DirectedGraph]:
    """Representatives of all strongly connected graphs with exactly ``m``
    edges on ``n`` vertices, ignoring the ``2n - 2`` bound."""
    if not 1 <= n <= MAX_N:
        raise UnsupportedSize(f"supports 1 <= n <= {MAX_N}, got n={n}")
    return _sorted_representatives(n, np.array(_strongly_connected_orbits(n, m), dtype=np.uint64))


def enumerate_by_ears(n: int) -> list[DirectedGraph]:
    """Same class as :func:`enumerate_by_subsets`, by edge and ear augmentation."""
    _check_size(n)
    codes = [c for m in range(n, 2 * n - 1) for c in _strongly_connected_orbits(n, m)]
    return _sorted_representatives(n, np.array(codes, dtype=np.uint64))


def enumerate_class(n: int) -> list[DirectedGraph]:
    """Canonical representatives of strongly connected graphs on ``n``
    vertices with at most ``2n - 2`` edges, ordered by ``(m, edges)``."""
    _check_size(n)
    return enumerate_by_subsets(n) if n <= 5 else enumerate_by_ears(n)


@dataclass(frozen=True)
class GraphRecord:
    graph: DirectedGraph
    answer: str
    certificate: str
    nontrivial_ear: bool
    isc: bool
    msc: bool

    @property
    def expected_dimension(self) -> bool:
        return self.answer == "YES"

    def to_dict(self) -> dict:
        return {
            "n": self.graph.n,
            "edges": [list(e) for e in self.graph.edges],
            "answer": self.answer,
            "certificate": self.certificate,
            "nontrivial_ear": self.nontrivial_ear,
            "isc": self.isc,
            "msc": self.msc,
        }


@dataclass(frozen=True)
class CensusRow:
    n: int
    total: int
    star: int
    c: int
    isc: int
    msc: int
    records: tuple[GraphRecord, ...] = field(default=(), repr=False, compare=False)

    def counts(self) -> tuple[int, ...]:
        return (self.total, self.star, self.c, self.isc, self.msc)

    def as_csv_row(self) -> str:
        return ",".join(str(x) for x in (self.n,) + self.counts())

    def to_dict(self) -> dict:
        return dict(zip(CSV_HEADER, (self.n,) + self.counts()))


def classify_graph(g: DirectedGraph, config: RunConfig) -> GraphRecord:
    verdict = decide(g, config)
    return GraphRecord(
        graph=g,
        answer=verdict.answer,
        certificate=verdict.certificate.kind,
        nontrivial_ear=find_nontrivial_ear_decomposition(g) is not None,
        isc=is_inductively_strongly_connected(g) is not None,
        msc=is_minimally_strongly_connected(g),
    )


def classify(n: int, config: Optional[RunConfig] = None) -> CensusRow:
    """Table of class sizes: all graphs, expected dimension, nontrivial ear
    decomposition, inductively and minimally strongly connected."""
    config = config or RunConfig(seed=0)
    records = tuple(classify_graph(g, config) for g in enumerate_class(n))
    return CensusRow(
        n=n,
        total=len(records),
        star=sum(r.expected_dimension for r in records),
        c=sum(r.nontrivial_ear for r in records),
        isc=sum(r.isc for r in records),
        msc=sum(r.msc for r in records),
        records=records,
    )


def rows_to_csv(rows: Iterable[CensusRow]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_HEADER)
    for row in rows:
        writer.writerow((row.n,) + row.counts())
    return buf.getvalue()


def records_to_jsonl(row: CensusRow) -> str:
    return "".join(json.dumps(r.to_dict()) + "\n" for r in row.records)
