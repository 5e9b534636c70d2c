"""Synthetic social network generator.

Builds RMAT graphs, labels exactly ten communities with constrained Louvain,
and fills in user attributes by propagating seed profiles through the
neighborhood structure.  See the README for the file formats and the CLI.
"""

__version__ = "0.1.0"

from .errors import ConfigError, GraphError, ParseError, SociogenError
from .graph import (
    Graph,
    NodeMetrics,
    average_degree,
    clustering_coefficient,
    clustering_coefficients,
    hits,
    load_edge_list,
    nodes_within_distance,
    save_edge_list,
)
from .louvain import (
    CommunityLabeling,
    detect_communities,
    load_communities,
    modularity,
    save_communities,
)
from .profiles import (
    Attribute,
    GenerationConfig,
    Profile,
    default_config,
    load_config,
    save_config,
    validate,
)
from .propagator import GenerationResult, UserTable, WeightedEdges, generate
from .rmat import RmatParams, expected_outdegree_count
from .rmat import generate as generate_graph
from .seeder import SeedSet, assign_seeds, check_representativeness, verify_seed_distances
from .stats import (
    DeviationReport,
    FrequencyTable,
    community_summary,
    deviation_report,
    frequency_table,
    rmat_fit_check,
)

__all__ = [
    "__version__",
    "Attribute",
    "CommunityLabeling",
    "ConfigError",
    "DeviationReport",
    "FrequencyTable",
    "GenerationConfig",
    "GenerationResult",
    "Graph",
    "GraphError",
    "NodeMetrics",
    "ParseError",
    "Profile",
    "RmatParams",
    "SeedSet",
    "SociogenError",
    "UserTable",
    "WeightedEdges",
    "assign_seeds",
    "average_degree",
    "check_representativeness",
    "clustering_coefficient",
    "clustering_coefficients",
    "community_summary",
    "default_config",
    "detect_communities",
    "deviation_report",
    "expected_outdegree_count",
    "frequency_table",
    "generate",
    "generate_graph",
    "hits",
    "load_communities",
    "load_config",
    "load_edge_list",
    "modularity",
    "nodes_within_distance",
    "rmat_fit_check",
    "save_communities",
    "save_config",
    "save_edge_list",
    "validate",
    "verify_seed_distances",
]
