import json
import random

import pytest

from scalingid.algebra import DEFAULT_PRIME, FieldElement
from scalingid.errors import NotStronglyConnected, ParameterMismatch
from scalingid.graph import DirectedGraph
from scalingid.identifiability import (
    NO,
    YES,
    Certificate,
    ParameterAssignment,
    RunConfig,
    b_rank_verdict,
    build_B,
    condition_support,
    decide,
    free_positions,
    index_sets,
    jacobian,
    jacobian_verdict,
)

from graphs import SUPPORT_PAIR, DEFICIENT5, EXCHANGE6, THREE_CYCLE, TWO_CYCLE

P = DEFAULT_PRIME


def test_index_set_sizes(census):
    for r in census[4].records:
        g = r.graph
        idx = index_sets(g)
        assert len(idx.L) == (g.n - 1) * (g.n - 2)
        assert len(idx.R) == g.n * (g.n - 1) - g.m
        assert list(idx.L) == sorted(idx.L) and list(idx.R) == sorted(idx.R)


def _commutator_columns(g, params):
    """Column (i, j) is A E_ij - E_ij A read off at the zero positions of A."""
    a = params.matrix(g)
    n = g.n
    idx = index_sets(g)
    cols = []
    for i, j in idx.L:
        e = [[int((r, c) == (i - 1, j - 1)) for c in range(n)] for r in range(n)]
        ae = [[sum(a[r][t] * e[t][c] for t in range(n)) for c in range(n)] for r in range(n)]
        ea = [[sum(e[r][t] * a[t][c] for t in range(n)) for c in range(n)] for r in range(n)]
        cols.append([ae[k - 1][l - 1] - ea[k - 1][l - 1] for k, l in idx.R])
    return [list(row) for row in zip(*cols)]


def test_B_is_the_commutator_restricted_to_zero_positions(census):
    rng = random.Random(4)
    for r in census[4].records + census[5].records[::25]:
        g = r.graph
        params = ParameterAssignment.from_values(g, [rng.randint(-50, 50) for _ in free_positions(g)])
        assert build_B(g, params).matrix == _commutator_columns(g, params)


def test_parameter_assignment_checks_shape():
    params = ParameterAssignment.from_values(THREE_CYCLE, [1, 2, 3, 4, 5, 6])
    assert params.value(2, 1) == 3  # positions (1,1),(1,3),(2,1),(2,2),(3,2),(3,3)
    with pytest.raises(ParameterMismatch):
        params.check(TWO_CYCLE)
    with pytest.raises(ParameterMismatch):
        ParameterAssignment.from_values(THREE_CYCLE, [1, 2])


def test_random_parameters_are_reproducible():
    a = ParameterAssignment.random(DEFICIENT5, P, 5, 0, 0)
    b = ParameterAssignment.random(DEFICIENT5, P, 5, 0, 0)
    assert a.values(DEFICIENT5) == b.values(DEFICIENT5)
    assert all(isinstance(x, FieldElement) for x in a.values(DEFICIENT5))


def test_jacobian_shape_and_conjugation_kernel():
    params = ParameterAssignment.random(EXCHANGE6, P, 1, 9)
    jac = jacobian(EXCHANGE6, params)
    assert len(jac) == 2 * EXCHANGE6.n - 1
    assert all(len(row) == EXCHANGE6.n + EXCHANGE6.m for row in jac)
    # scaling x_v by e^t (v != 1) moves a_uv by -a_uv and a_vu by +a_vu, fixing both charpolys
    positions = free_positions(EXCHANGE6)
    for v in range(2, EXCHANGE6.n + 1):
        direction = []
        for i, j in positions:
            x = params.value(i, j)
            direction.append(int(x) if i == v and j != v else (-int(x) if j == v and i != v else 0))
        for row in jac:
            assert sum(int(c) * d for c, d in zip(row, direction)) % P == 0


def test_small_verdicts(config):
    assert decide(DirectedGraph(1), config).certificate.kind == "SingleCompartment"
    assert decide(TWO_CYCLE, config).answer == YES
    assert decide(THREE_CYCLE, config).answer == YES
    complete = DirectedGraph(3, [(u, v) for u in (1, 2, 3) for v in (1, 2, 3) if u != v])
    verdict = decide(complete, config)
    assert verdict.answer == NO and verdict.certificate.kind == "EdgeBound"


def test_two_cycle_has_empty_B(config):
    result = b_rank_verdict(TWO_CYCLE, config)
    assert (result.rank, result.target, result.full) == (0, 0, True)
    assert jacobian_verdict(TWO_CYCLE, config).rank == 3


def test_not_strongly_connected_rejected(config):
    with pytest.raises(NotStronglyConnected):
        decide(DirectedGraph(2, [(1, 2)]), config)


@pytest.mark.parametrize("kwargs", [
    {"prime": 15},
    {"prime": 2},
    {"prime": (1 << 89) - 1},
    {"trials": 0},
    {"mode": "slow"},
    {"seed": -1},
    {"structural_order": ("ear", "magic")},
])
def test_run_config_validation(kwargs):
    with pytest.raises(ValueError):
        RunConfig(**{"seed": 1, **kwargs})


def test_prime_must_exceed_vertex_count():
    with pytest.raises(ValueError):
        decide(DEFICIENT5, RunConfig(prime=5, seed=1))


def test_certificate_polarity_invariants():
    with pytest.raises(ValueError):
        Certificate("EdgeBound", YES)
    with pytest.raises(ValueError):
        Certificate("MinimallyStronglyConnected", NO)
    with pytest.raises(ValueError):
        Certificate("RankTest", YES, {"rank": 3, "L_size": 4})


def test_condition_support_examples():
    assert condition_support(SUPPORT_PAIR) == (2, 3)
    assert condition_support(THREE_CYCLE) is None


def test_condition_support_implies_rank_deficiency(census, config):
    for n in (3, 4, 5):
        for r in census[n].records:
            if condition_support(r.graph) is not None:
                assert not b_rank_verdict(r.graph, config).full


@pytest.mark.parametrize("mode", ["fast", "structural", "rank", "audit"])
def test_modes_agree_on_census(census, mode):
    config = RunConfig(seed=77, mode=mode)
    for n in (3, 4):
        for r in census[n].records:
            assert decide(r.graph, config).answer == r.answer


def test_structural_mode_uses_structural_certificates():
    config = RunConfig(seed=1, mode="structural")
    assert decide(THREE_CYCLE, config).certificate.kind == "NontrivialEarDecomposition"
    config = RunConfig(seed=1, mode="structural", structural_order=("msc",))
    assert decide(THREE_CYCLE, config).certificate.kind == "MinimallyStronglyConnected"


def test_audit_reports_both_ranks():
    verdict = decide(EXCHANGE6, RunConfig(seed=3, mode="audit"))
    assert verdict.rank == 20 and verdict.jacobian_rank == EXCHANGE6.m + 1


def test_verdict_json_is_deterministic():
    a = decide(DEFICIENT5, RunConfig(seed=42)).to_json()
    b = decide(DEFICIENT5, RunConfig(seed=42)).to_json()
    assert a == b
    data = json.loads(a)
    assert data["seed"] == 42
    assert data["certificate"]["kind"] == "RankTest"


def test_tiny_prime_never_overestimates_rank():
    # random evaluation can only lose rank, never gain it
    for seed in range(20):
        result = b_rank_verdict(DEFICIENT5, RunConfig(prime=7, trials=1, seed=seed))
        assert result.rank <= 11
