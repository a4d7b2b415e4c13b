"""Deciding whether a compartment graph has the expected dimension, i.e.
whether an identifiable scaling reparametrization exists.

Two randomized criteria are implemented over GF(p):

* the rank of the commutator-constraint matrix ``B(G)`` (rows: zero
  positions of ``A(G)``, columns: off-diagonal positions avoiding row and
  column 1) must equal its column count;
* the Jacobian of the double characteristic polynomial map
  ``A -> (charpoly(A), charpoly(A_1))`` must have rank ``m + 1``.

A random evaluation can only under-estimate a generic rank, so both take
the maximum over independent trials. Cheap combinatorial shortcuts
(edge bound, row/column support containment, ear decompositions, minimal
or inductive strong connectivity) short-circuit the rank test.
"""

from __future__ import annotations

import json
import secrets
from dataclasses import dataclass, field
from typing import Any, Mapping, Optional

from .algebra import (
    DEFAULT_PRIME,
    DualNumber,
    char_poly_coeffs,
    eps_part,
    make_rng,
    nullspace,
    rank,
    sample_field,
)
from .ears import find_nontrivial_ear_decomposition
from .errors import OracleDisagreement, ParameterMismatch
from .graph import (
    DirectedGraph,
    is_inductively_strongly_connected,
    is_minimally_strongly_connected,
    require_strongly_connected,
)

Position = tuple[int, int]

MODES = ("fast", "structural", "audit", "rank")
STRUCTURAL_CHECKS = ("ear", "msc", "isc")

# RNG stream ids, so B-trials, Jacobian trials and audit re-runs never share draws
_STREAM_B = 0
_STREAM_JACOBIAN = 1
_STREAM_AUDIT = 2


def _is_prime(p: int) -> bool:
    from sympy import isprime

    return bool(isprime(p))


@dataclass(frozen=True)
class RunConfig:
    prime: int = DEFAULT_PRIME
    trials: int = 3
    seed: int = field(default_factory=lambda: secrets.randbits(64))
    mode: str = "fast"
    structural_order: tuple[str, ...] = STRUCTURAL_CHECKS

    def __post_init__(self):
        if self.trials < 1:
            raise ValueError("trials must be at least 1")
        if self.mode not in MODES:
            raise ValueError(f"mode must be one of {MODES}, got {self.mode!r}")
        if not 0 <= self.seed < 1 << 64:
            raise ValueError("seed must be a 64-bit unsigned integer")
        if not 2 < self.prime < 1 << 64 or not _is_prime(self.prime):
            raise ValueError(f"prime must be an odd prime below 2**64, got {self.prime}")
        unknown = set(self.structural_order) - set(STRUCTURAL_CHECKS)
        if unknown:
            raise ValueError(f"unknown structural checks {sorted(unknown)}")


# --------------------------------------------------------------------------
# parameters


def free_positions(g: DirectedGraph) -> list[Position]:
    """Nonzero positions of ``A(G)`` in row-major order: ``(i, i)`` for every
    vertex and ``(v, u)`` for every edge ``u -> v``."""
    return sorted({(i, i) for i in g.vertices} | {(v, u) for u, v in g.edges})


@dataclass(frozen=True)
class ParameterAssignment:
    """Values of ``a_ij`` on the free positions of ``A(G)``.

    ``diag[i-1]`` is ``a_ii``; ``edges[(i, j)]`` is ``a_ij`` for the edge
    ``j -> i``. Leaks are absorbed into independent diagonal entries.
    """

    diag: tuple
    edges: Mapping[Position, Any]
    seed: Optional[int] = None

    @classmethod
    def from_values(cls, g: DirectedGraph, values, seed=None) -> "ParameterAssignment":
        """Assign ``values`` to :func:`free_positions` in order."""
        values = list(values)
        positions = free_positions(g)
        if len(values) != len(positions):
            raise ParameterMismatch(f"expected {len(positions)} values, got {len(values)}")
        table = dict(zip(positions, values))
        diag = tuple(table.pop((i, i)) for i in g.vertices)
        return cls(diag, table, seed)

    @classmethod
    def random(cls, g: DirectedGraph, prime: int, seed: int, *stream: int) -> "ParameterAssignment":
        rng = make_rng(seed, *stream)
        return cls.from_values(g, sample_field(rng, g.n + g.m, prime), seed)

    def value(self, i: int, j: int):
        return self.diag[i - 1] if i == j else self.edges[(i, j)]

    def values(self, g: DirectedGraph) -> list:
        return [self.value(i, j) for i, j in free_positions(g)]

    def check(self, g: DirectedGraph) -> None:
        expected = {(v, u) for u, v in g.edges}
        if len(self.diag) != g.n or set(self.edges) != expected:
            raise ParameterMismatch("parameter assignment does not match the graph's edge set")

    def matrix(self, g: DirectedGraph) -> list[list]:
        """The evaluated ``n x n`` parameter matrix ``A``."""
        self.check(g)
        zero = self.diag[0] - self.diag[0]
        a = [[zero] * g.n for _ in range(g.n)]
        for i in g.vertices:
            a[i - 1][i - 1] = self.diag[i - 1]
        for (i, j), x in self.edges.items():
            a[i - 1][j - 1] = x
        return a


# --------------------------------------------------------------------------
# the B(G) matrix


@dataclass(frozen=True)
class IndexSets:
    L: tuple[Position, ...]
    R: tuple[Position, ...]


def index_sets(g: DirectedGraph) -> IndexSets:
    """Columns ``L``: ``(i, j)`` with ``i != j`` in ``2..n``. Rows ``R``:
    ``(k, l)`` with ``k != l`` and no edge ``l -> k``. Both lexicographic."""
    cols = tuple((i, j) for i in range(2, g.n + 1) for j in range(2, g.n + 1) if i != j)
    rows = tuple(
        (k, l) for k in g.vertices for l in g.vertices if k != l and not g.has_edge(l, k)
    )
    return IndexSets(cols, rows)


def b_entry(g: DirectedGraph, row: Position, col: Position) -> Optional[tuple]:
    """Symbolic entry of ``B(G)`` at ``((k, l), (i, j))``.

    Returns ``(-1, (j, l))`` for ``-a_jl``, ``(1, (k, i))`` for ``a_ki``,
    ``(0, (k, k), (l, l))`` for ``a_kk - a_ll``, or ``None`` for zero.
    """
    k, l = row
    i, j = col
    if i == k and j == l:
        return (0, (k, k), (l, l))
    if i == k and g.has_edge(l, j):
        return (-1, (j, l))
    if j == l and g.has_edge(i, k):
        return (1, (k, i))
    return None


def _symbol(pos: Position) -> str:
    i, j = pos
    return f"a{i}{j}" if i < 10 and j < 10 else f"a{i},{j}"


def format_entry(term: Optional[tuple]) -> str:
    if term is None:
        return "0"
    if term[0] == 0:
        return f"{_symbol(term[1])}-{_symbol(term[2])}"
    return ("-" if term[0] < 0 else "") + _symbol(term[1])


def b_pattern(g: DirectedGraph) -> list[list[str]]:
    """``B(G)`` as strings such as ``"a22-a33"``, ``"-a53"`` or ``"0"``."""
    idx = index_sets(g)
    return [[format_entry(b_entry(g, r, c)) for c in idx.L] for r in idx.R]


@dataclass(frozen=True)
class IndexedBMatrix:
    index_sets: IndexSets
    matrix: list[list]

    def to_dict(self) -> dict:
        return {
            "rows": [list(r) for r in self.index_sets.R],
            "cols": [list(c) for c in self.index_sets.L],
            "entries": [[int(x) for x in row] for row in self.matrix],
        }


def build_B(g: DirectedGraph, params: ParameterAssignment) -> IndexedBMatrix:
    params.check(g)
    idx = index_sets(g)
    zero = params.diag[0] - params.diag[0]
    rows = []
    for r in idx.R:
        row = []
        for c in idx.L:
            term = b_entry(g, r, c)
            if term is None:
                row.append(zero)
            elif term[0] == 0:
                row.append(params.value(*term[1]) - params.value(*term[2]))
            elif term[0] > 0:
                row.append(params.value(*term[1]))
            else:
                row.append(-params.value(*term[1]))
        rows.append(row)
    return IndexedBMatrix(idx, rows)


@dataclass(frozen=True)
class RankResult:
    rank: int
    target: int  # |L| for B(G), m + 1 for the Jacobian
    trials_run: int

    @property
    def full(self) -> bool:
        return self.rank == self.target


def _max_rank(g, config, stream, evaluate, target, trials=None) -> RankResult:
    best, run = -1, 0
    for t in range(trials or config.trials):
        params = ParameterAssignment.random(g, config.prime, config.seed, stream, t)
        best = max(best, evaluate(params))
        run += 1
        if best >= target:
            break
    return RankResult(best, target, run)


def b_rank_verdict(g: DirectedGraph, config: RunConfig, stream: int = _STREAM_B) -> RankResult:
    """Generic rank of ``B(G)``: maximum over ``config.trials`` random points,
    stopping early once full column rank is seen."""
    require_strongly_connected(g)
    idx = index_sets(g)
    if not idx.L:
        return RankResult(0, 0, 0)
    return _max_rank(
        g, config, stream, lambda params: rank(build_B(g, params).matrix, config.prime), len(idx.L)
    )


# --------------------------------------------------------------------------
# the double characteristic polynomial map and its Jacobian


def coefficient_map(g: DirectedGraph, params: ParameterAssignment) -> list:
    """``(c_1..c_n, d_1..d_{n-1})``: characteristic polynomial coefficients of
    ``A`` and of ``A_1`` (row and column 1 deleted)."""
    return _coefficients(params.matrix(g))


def _coefficients(a: list[list]) -> list:
    a1 = [row[1:] for row in a[1:]]
    return char_poly_coeffs(a) + char_poly_coeffs(a1)


def jacobian(g: DirectedGraph, params: ParameterAssignment) -> list[list]:
    """``(2n-1) x (n+m)`` Jacobian of :func:`coefficient_map`; column ``q``
    comes from one evaluation with a dual number at ``free_positions(g)[q]``."""
    base = params.matrix(g)
    zero = params.diag[0] - params.diag[0]
    columns = []
    for i, j in free_positions(g):
        a = [row[:] for row in base]
        a[i - 1][j - 1] = DualNumber(base[i - 1][j - 1], zero + 1)
        columns.append([eps_part(x, zero) for x in _coefficients(a)])
    return [list(row) for row in zip(*columns)]


def jacobian_verdict(g: DirectedGraph, config: RunConfig) -> RankResult:
    """Generic rank of the Jacobian; the graph has the expected dimension iff
    it equals ``m + 1``."""
    require_strongly_connected(g)
    width = g.n + g.m

    def evaluate(params):
        jac = jacobian(g, params)
        r = rank(jac, config.prime)
        kernel = nullspace(jac, config.prime, cols=width)
        assert len(kernel) == width - r, "rank-nullity violated"
        for vec in kernel:
            for row in jac:
                assert sum(int(x) * y for x, y in zip(row, vec)) % config.prime == 0
        return r

    # rank is at most m+1: diagonal conjugations fix the coefficients
    return _max_rank(g, config, _STREAM_JACOBIAN, evaluate, g.m + 1)


# --------------------------------------------------------------------------
# combinatorial shortcuts


def condition_support(g: DirectedGraph) -> Optional[Position]:
    """First pair ``(i, j)``, ``i != j`` in ``2..n``, such that the support of
    row ``j`` of ``A(G)`` lies inside row ``i`` and column ``i`` inside
    column ``j``. The diagonal counts as support."""
    row_support = {v: {v} | set(g.predecessors[v]) for v in g.vertices}
    col_support = {v: {v} | set(g.successors[v]) for v in g.vertices}
    for i in range(2, g.n + 1):
        for j in range(2, g.n + 1):
            if i != j and row_support[j] <= row_support[i] and col_support[i] <= col_support[j]:
                return (i, j)
    return None


# --------------------------------------------------------------------------
# certified verdicts

YES, NO = "YES", "NO"

_YES_ONLY = {
    "NontrivialEarDecomposition",
    "MinimallyStronglyConnected",
    "InductivelyStronglyConnected",
    "SingleCompartment",
}
_NO_ONLY = {"EdgeBound", "ConditionSupport"}


@dataclass(frozen=True)
class Certificate:
    kind: str
    polarity: str
    witness: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.kind in _YES_ONLY and self.polarity != YES:
            raise ValueError(f"{self.kind} certificates are YES-only")
        if self.kind in _NO_ONLY and self.polarity != NO:
            raise ValueError(f"{self.kind} certificates are NO-only")
        if self.kind == "RankTest":
            full = self.witness["rank"] == self.witness["L_size"]
            if full != (self.polarity == YES):
                raise ValueError("RankTest polarity must match rank == |L|")

    def to_dict(self) -> dict:
        return {"kind": self.kind, "polarity": self.polarity, **self.witness}

    def __str__(self) -> str:
        args = ", ".join(f"{k}={v}" for k, v in self.witness.items())
        return f"{self.kind}({args})"


@dataclass(frozen=True)
class Verdict:
    answer: str
    certificate: Certificate
    config: RunConfig
    n: int
    m: int
    L_size: int
    R_size: int
    rank: Optional[int] = None
    jacobian_rank: Optional[int] = None

    @property
    def expected_dimension(self) -> bool:
        return self.answer == YES

    def to_dict(self) -> dict:
        return {
            "answer": self.answer,
            "certificate": self.certificate.to_dict(),
            "prime": self.config.prime,
            "trials": self.config.trials,
            "seed": self.config.seed,
            "mode": self.config.mode,
            "rank": self.rank,
            "L_size": self.L_size,
            "R_size": self.R_size,
            "jacobian_rank": self.jacobian_rank,
            "n": self.n,
            "m": self.m,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict())


def _structural_certificate(g: DirectedGraph, check: str) -> Optional[Certificate]:
    if check == "ear":
        ed = find_nontrivial_ear_decomposition(g)
        if ed is not None:
            return Certificate("NontrivialEarDecomposition", YES, {"ears": ed.to_list()})
    elif check == "msc":
        if is_minimally_strongly_connected(g):
            return Certificate("MinimallyStronglyConnected", YES)
    elif check == "isc":
        if g.m <= 2 * g.n - 2:
            order = is_inductively_strongly_connected(g)
            if order is not None:
                return Certificate("InductivelyStronglyConnected", YES, {"ordering": list(order)})
    return None


def _rank_certificate(result: RankResult, config: RunConfig) -> Certificate:
    return Certificate(
        "RankTest",
        YES if result.full else NO,
        {
            "rank": result.rank,
            "L_size": result.target,
            "trials": config.trials,
            "prime": config.prime,
            "seed": config.seed,
        },
    )


def _shortcut_certificate(g: DirectedGraph, config: RunConfig) -> Optional[Certificate]:
    if g.n == 1:
        return Certificate("SingleCompartment", YES)
    if g.m > 2 * g.n - 2:
        return Certificate("EdgeBound", NO, {"m": g.m, "bound": 2 * g.n - 2})
    pair = condition_support(g)
    if pair is not None:
        return Certificate("ConditionSupport", NO, {"pair": list(pair)})
    if config.mode in ("structural", "audit"):
        for check in config.structural_order:
            cert = _structural_certificate(g, check)
            if cert is not None:
                return cert
    return None


def decide(g: DirectedGraph, config: Optional[RunConfig] = None) -> Verdict:
    """Certified YES/NO: does ``g`` have the expected dimension?

    Modes: ``fast`` (edge bound, support condition, then rank test),
    ``structural`` (adds ear/MSC/ISC certificates before the rank test),
    ``rank`` (rank test only) and ``audit`` (structural, plus both rank
    criteria always run, a fresh-seed re-run before any rank-based NO, and
    :class:`OracleDisagreement` on any inconsistency).
    """
    config = config or RunConfig()
    require_strongly_connected(g)
    if config.prime <= g.n:
        raise ValueError(f"prime {config.prime} must exceed the vertex count {g.n}")
    idx = index_sets(g)
    sizes = dict(n=g.n, m=g.m, L_size=len(idx.L), R_size=len(idx.R))

    cert = None if config.mode == "rank" else _shortcut_certificate(g, config)
    if cert is not None and config.mode != "audit":
        return Verdict(cert.polarity, cert, config, **sizes)

    result = b_rank_verdict(g, config)
    if config.mode != "audit":
        return Verdict(result_answer(result), _rank_certificate(result, config), config,
                       rank=result.rank, **sizes)

    if not result.full:
        rerun = b_rank_verdict(g, config, stream=_STREAM_AUDIT)
        result = RankResult(max(result.rank, rerun.rank), result.target,
                            result.trials_run + rerun.trials_run)
    jac = jacobian_verdict(g, config)
    if jac.full != result.full:
        raise OracleDisagreement(
            f"B(G) rank {result.rank}/{result.target} but Jacobian rank {jac.rank}/{jac.target} for {g}"
        )
    if cert is not None and (cert.polarity == YES) != result.full:
        raise OracleDisagreement(f"{cert} contradicts B(G) rank {result.rank}/{result.target} for {g}")
    cert = cert or _rank_certificate(result, config)
    return Verdict(cert.polarity, cert, config, rank=result.rank, jacobian_rank=jac.rank, **sizes)


def result_answer(result: RankResult) -> str:
    return YES if result.full else NO
