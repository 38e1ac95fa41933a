"""fracdecomp: exact fractional clique decompositions of dense graphs.

Constructive routes (closed-form matching-removed decompositions, the
sparse-complement recursion, symmetric member families, per-edge
corrective shaping, and the exact lift) are cross-checked against an
independent exact-rational LP feasibility oracle.  Deterministic
results are exact rationals end to end; the staged Monte Carlo sampler
is the only approximate component and is labelled as such everywhere.
"""

__version__ = "0.1.0"

from .graph import (
    CliqueWeighting,
    Graph,
    blow_up,
    complete_graph,
    complete_multipartite,
    doubled_path_complement,
    enumerate_cliques,
    verify_weighting,
)
from .kminusm import (
    class_weights,
    closed_form_type_weights,
    decompose_clique_minus_matching,
    edge_type_counts,
)
from .recursion import (
    MatchingPartition,
    decompose_sparse_complement,
    partition_cycle_edges,
    partition_doubled_path_complement,
)
from .families import (
    decompose_via_family,
    equalize_marginals,
    matching_member_decomposer,
    paired_groups_family,
    two_per_class_family,
)
from .correction import lift_to_exact, one_factorize, shape_weights
from .lp import lp_approx_weighting, lp_feasible
from .pipeline import PipelineConfig, degree_gate, project_weighting, run_pipeline
from .sampler import (
    approx_weighting_via_sampler,
    conditional_pair_stats,
    estimate_edge_marginals,
    sample_subgraph,
)

__all__ = [
    "CliqueWeighting",
    "Graph",
    "MatchingPartition",
    "PipelineConfig",
    "approx_weighting_via_sampler",
    "blow_up",
    "class_weights",
    "closed_form_type_weights",
    "complete_graph",
    "complete_multipartite",
    "conditional_pair_stats",
    "decompose_clique_minus_matching",
    "decompose_sparse_complement",
    "decompose_via_family",
    "degree_gate",
    "doubled_path_complement",
    "edge_type_counts",
    "enumerate_cliques",
    "equalize_marginals",
    "estimate_edge_marginals",
    "lift_to_exact",
    "lp_approx_weighting",
    "lp_feasible",
    "matching_member_decomposer",
    "one_factorize",
    "paired_groups_family",
    "partition_cycle_edges",
    "partition_doubled_path_complement",
    "project_weighting",
    "run_pipeline",
    "sample_subgraph",
    "shape_weights",
    "two_per_class_family",
    "verify_weighting",
]
