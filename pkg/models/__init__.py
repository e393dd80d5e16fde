from .tree_models import RHO, PhyloTree, Chain
from .forest_models import AgreementForest, InheritanceGraph, ChainForest, ForestFlavor
from .graph_models import WeightedDigraph, WeightExpansion, AuxiliaryGraph
from .network_models import HybridNetwork, Generator
from .reduction_models import ReducedChain, ReducedInstance
from .generation_models import GeneratorParams, ChainKind, ChainProvenance, GenerationResult
from .report_models import RunReport, ApproximationResult

__all__ = [
    'RHO', 'PhyloTree', 'Chain',
    'AgreementForest', 'InheritanceGraph', 'ChainForest', 'ForestFlavor',
    'WeightedDigraph', 'WeightExpansion', 'AuxiliaryGraph',
    'HybridNetwork', 'Generator',
    'ReducedChain', 'ReducedInstance',
    'GeneratorParams', 'ChainKind', 'ChainProvenance', 'GenerationResult',
    'RunReport', 'ApproximationResult',
]
