"""Hypergraph coarsening by spectral seeding and strongly-local flow refinement."""
from ._backend import BACKEND
from .coarsen import (
    ClusterAssignment,
    CoarseningResult,
    CoarsenConfig,
    ConfigError,
    balanced_assign,
    coarsen,
    contract,
)
from .embed import Embedding, SeedClusterSet, initial_clusters, kmeans, smooth_embed
from .flow import FlowNetwork, LocalHypergraph, build_flow_network, flow_refine, hlc, max_flow
from .hypergraph import (
    BipartiteGraph,
    Hypergraph,
    HypergraphError,
    HypergraphFormatError,
    VertexSet,
    clique_expand,
    conductance,
    cut,
    format_hmetis,
    parse_hmetis,
    read_hmetis,
    star_expand,
    volume,
    write_hmetis,
)
from .metrics import (
    average_local_conductance,
    brute_force_min_hlc,
    cut_preservation,
    dense_spectrum,
    kway_conductance,
)
from .partition import Partitioning, partition

__version__ = "0.1.0"
