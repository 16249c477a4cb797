"""Linear quadruple systems: constructions, containment testers,
extremal bounds, and exact search at desk scale."""

from .hypergraph import (
    CapacityError,
    FormatError,
    Hypergraph,
    HypergraphError,
    LeaveGraph,
    LinearityError,
    PairCoverage,
    add_edge_linear,
    components,
    degree,
    degree_sequence,
    degree_vector,
    hypergraph,
    is_linear,
    leave_graph,
    parse,
    serialize,
)
from .patterns import (
    Embedding,
    Matching,
    TreePattern,
    contains_matching,
    contains_tree,
    is_acyclic,
    is_free,
    named_pattern,
    parse_pattern,
    validate_embedding,
)

__version__ = "0.1.0"
