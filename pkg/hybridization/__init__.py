from .errors import (
    HybridizationError,
    InvalidInputError,
    SizeLimitExceededError,
)
from .io_formats import (
    parse_tree, write_tree, parse_network, write_network,
    parse_digraph, write_digraph, parse_forest, write_forest,
    parse_result, write_result,
)
from .agreement_forest import chain_forest, inheritance_graph, is_acyclic, is_agreement_forest, splitting
from .tree_reduction import expand_forest, forest_weight, is_legitimate, reduce_pair
from .network import displays, extract_generator, hybridization_count, network_from_forest
from .dfvs_core import exact_dfvs, greedy_dfvs, is_fvs, DfvsSolverFactory
from .hybrid_to_dfvs import build_auxiliary_graph, approximate_hybridization, HybridizationPipeline
from .dfvs_to_hybrid import default_params, generate_trees, split_vertices
from .oracles import brute_force_maaf, brute_force_splitting, exact_h

__all__ = [
    'HybridizationError', 'InvalidInputError', 'SizeLimitExceededError',
    'parse_tree', 'write_tree', 'parse_network', 'write_network',
    'parse_digraph', 'write_digraph', 'parse_forest', 'write_forest',
    'parse_result', 'write_result',
    'chain_forest', 'inheritance_graph', 'is_acyclic', 'is_agreement_forest', 'splitting',
    'expand_forest', 'forest_weight', 'is_legitimate', 'reduce_pair',
    'displays', 'extract_generator', 'hybridization_count', 'network_from_forest',
    'exact_dfvs', 'greedy_dfvs', 'is_fvs', 'DfvsSolverFactory',
    'build_auxiliary_graph', 'approximate_hybridization', 'HybridizationPipeline',
    'default_params', 'generate_trees', 'split_vertices',
    'brute_force_maaf', 'brute_force_splitting', 'exact_h',
]
