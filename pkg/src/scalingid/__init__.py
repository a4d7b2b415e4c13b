"""Identifiable scaling reparametrizations of linear compartment models."""

from .census import CensusRow, classify, enumerate_class
from .ears import EarDecomposition, find_nontrivial_ear_decomposition, fewest_trivial_ears
from .errors import (
    GraphError,
    GraphParseError,
    NoExchangeWith,
    NoSuchEdge,
    NotStronglyConnected,
    OracleDisagreement,
    OverlapViolation,
    ParameterMismatch,
    ScalingIdError,
    UnknownVertex,
    UnsupportedSize,
)
from .graph import (
    DirectedGraph,
    canonical_form,
    exchanges,
    is_inductively_strongly_connected,
    is_minimally_strongly_connected,
    is_strongly_connected,
)
from .identifiability import (
    Certificate,
    ParameterAssignment,
    RunConfig,
    Verdict,
    b_rank_verdict,
    build_B,
    condition_support,
    decide,
    jacobian,
    jacobian_verdict,
)
from .io import load_graph, parse_graph
from .transforms import (
    RepairResult,
    add_exchange_vertex,
    add_line_segment,
    collapse_exchange,
    repair,
    subdivide_edge,
    union_at_vertex,
)

__version__ = "0.1.0"
