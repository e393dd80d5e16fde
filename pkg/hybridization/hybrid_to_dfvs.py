"""
Прямая редукция: вспомогательный взвешенный орграф по лесу цепочек B_T,
переводы FVS <-> B_T-разбиение и конвейер аппроксимации числа гибридизации.
"""
import time
from typing import Dict, FrozenSet, Iterable, List, Optional, Sequence, Tuple

from config.logging import get_logger
from config.settings import DEFAULT_SOLVER
from hybridization.agreement_forest import (
    ForestChecker,
    chain_forest,
    find_cycle,
    is_acyclic,
    splitting,
)
from hybridization.dfvs_core import DfvsSolverFactory, is_fvs, remaining_cycle
from hybridization.errors import CyclicForestError, NotFeedbackVertexSetError, PreconditionError
from hybridization.network import network_from_forest
from hybridization.phylo_core import is_isomorphic, require_same_taxa
from hybridization.tree_reduction import (
    check_kernel_bound,
    expand_subtrees,
    reduce_pair,
    reduce_subtrees,
)
from models.forest_models import AgreementForest, ChainForest, ForestFlavor
from models.graph_models import AuxiliaryGraph, WeightedDigraph
from models.network_models import HybridNetwork
from models.report_models import ApproximationResult, RunReport
from models.tree_models import PhyloTree
from utils.monitoring import measure_latency

logger = get_logger("hybridization.hybrid_to_dfvs")

BAR_SUFFIX = ".bar"


def build_auxiliary_graph(b_t: ChainForest, t1: PhyloTree, t2: PhyloTree) -> AuxiliaryGraph:
    """
    G: граф наследования B_T без вершин не-цепочек; вершина цепочки имеет
    вес n и 2-цикл с новой вершиной v.bar веса 1.
    """
    if b_t.flavor != ForestFlavor.OVER_T:
        raise PreconditionError("auxiliary graph is built from the chain forest over T")
    graph = ForestChecker(t1, t2).inheritance_graph(b_t.forest)

    chain_of_component: Dict[int, int] = {}
    for i, chain in enumerate(b_t.chains):
        chain_of_component[b_t.forest.components.index(frozenset(chain))] = i

    names = [chain[0] for chain in b_t.chains]
    vertices: List[str] = []
    weights: Dict[str, int] = {}
    barred: Dict[str, str] = {}
    for name, chain in zip(names, b_t.chains):
        bar = f"{name}{BAR_SUFFIX}"
        vertices.extend((name, bar))
        weights[name] = len(chain)
        weights[bar] = 1
        barred[bar] = name

    edges: List[Tuple[str, str]] = []
    for i, j in graph.edges:
        if i in chain_of_component and j in chain_of_component:
            edges.append((names[chain_of_component[i]], names[chain_of_component[j]]))
    for name in names:
        edges.append((name, f"{name}{BAR_SUFFIX}"))
        edges.append((f"{name}{BAR_SUFFIX}", name))

    aux = AuxiliaryGraph(
        graph=WeightedDigraph(vertices=tuple(vertices), weights=weights, edges=tuple(edges)),
        chain_forest=b_t,
        chain_vertex={name: i for i, name in enumerate(names)},
        barred=barred,
    )
    logger.debug(
        f"Auxiliary graph: {len(vertices)} vertices, {len(edges)} edges, s={aux.s}"
    )
    return aux


def normalize_fvs(aux: AuxiliaryGraph, f: Iterable[str]) -> FrozenSet[str]:
    """Убрать v.bar, если выбран и его партнёр v"""
    chosen = set(f)
    return frozenset(
        v for v in chosen if not (v in aux.barred and aux.barred[v] in chosen)
    )


def fvs_to_splitting(aux: AuxiliaryGraph, f: Iterable[str]) -> AgreementForest:
    """Атомизировать цепочки, чья небарированная вершина выбрана; |F| = k + s"""
    chosen = set(f)
    if not is_fvs(aux.graph, chosen):
        raise NotFeedbackVertexSetError(remaining_cycle(aux.graph, chosen) or [])
    chosen = normalize_fvs(aux, chosen)
    atomize = [
        aux.chain_forest.chains[index]
        for name, index in aux.chain_vertex.items()
        if name in chosen
    ]
    return splitting(aux.chain_forest, atomize)


def splitting_to_fvs(aux: AuxiliaryGraph, atomized: Iterable[Sequence[str]]) -> FrozenSet[str]:
    """v для атомизированных цепочек, v.bar для выживших"""
    b_t = aux.chain_forest
    indices = {b_t.chain_index(chain) for chain in atomized}
    chosen = frozenset(
        name if index in indices else f"{name}{BAR_SUFFIX}"
        for name, index in aux.chain_vertex.items()
    )
    if not is_fvs(aux.graph, chosen):
        raise CyclicForestError()
    return chosen


class HybridizationPipeline:
    """
    Редукция поддеревьев -> редукция цепочек -> лес цепочек -> граф G ->
    решатель DFVS -> B_T-разбиение -> развёртка поддеревьев -> сеть.
    """

    def __init__(self, solver: str = DEFAULT_SOLVER, threads: int = 1, max_vertices: Optional[int] = None):
        kwargs = {"threads": threads, "max_vertices": max_vertices} if solver == "exact" else {}
        self.solver = DfvsSolverFactory.create(solver, **kwargs)
        self.logger = get_logger("hybridization.hybrid_to_dfvs")

    @measure_latency
    def run(
        self,
        t1: PhyloTree,
        t2: PhyloTree,
        exact_h: Optional[int] = None,
        instance: str = "",
    ) -> ApproximationResult:
        started = time.perf_counter()
        require_same_taxa(t1, t2)
        self.logger.info(f"Pipeline started on {len(t1.taxa)} taxa with solver {self.solver.name}")

        if is_isomorphic(t1, t2):
            forest = AgreementForest.create([t1.leaf_labels])
            report = self._report(
                instance, 0, started, exact_h=exact_h, reduced_leaves=1 if t1.taxa else 0
            )
            return ApproximationResult(
                hybridization_number=0,
                forest=forest,
                network=HybridNetwork.from_tree(t1),
                fvs_weight=0,
                report=report,
            )

        subtrees = reduce_subtrees(t1, t2)
        s1, s2 = subtrees.s, subtrees.s_prime
        inst = reduce_pair(s1, s2)
        _, b_t = chain_forest(s1, s2, inst)
        aux = build_auxiliary_graph(b_t, s1, s2)

        fvs = normalize_fvs(aux, self.solver.solve(aux.graph))
        reduced_forest = fvs_to_splitting(aux, fvs)
        checker = ForestChecker(s1, s2)
        graph = checker.inheritance_graph(reduced_forest)
        if not is_acyclic(graph):
            raise CyclicForestError(find_cycle(graph))

        forest = expand_subtrees(reduced_forest, subtrees)
        network = network_from_forest(forest, t1, t2)
        k = aux.graph.weight_of(fvs)
        r = forest.size - 1

        report = self._report(
            instance,
            r,
            started,
            exact_h=exact_h,
            k=k,
            s=b_t.s,
            b_t_size=b_t.size,
            reduced_leaves=len(inst.reduced_taxa),
            chains=len(b_t.chains),
            kernel_bound_ok=check_kernel_bound(inst, exact_h) if exact_h else None,
            chain_forest_bound_ok=b_t.size <= 5 * exact_h if exact_h else None,
            splitting_bound_ok=reduced_forest.size <= 6 * exact_h if exact_h else None,
        )
        self.logger.info(
            f"Pipeline finished: r={r}, k={k}, s={b_t.s}, |B_T|={b_t.size} "
            f"in {report.wall_time:.3f}s"
        )
        return ApproximationResult(
            hybridization_number=r, forest=forest, network=network, fvs_weight=k, report=report
        )

    def _report(self, instance: str, r: int, started: float, **fields) -> RunReport:
        return RunReport(
            instance=instance,
            hybridization_number=r,
            solver=self.solver.name,
            wall_time=time.perf_counter() - started,
            **fields,
        )


def approximate_hybridization(
    t1: PhyloTree,
    t2: PhyloTree,
    solver: str = DEFAULT_SOLVER,
    exact_h: Optional[int] = None,
    threads: int = 1,
    max_vertices: Optional[int] = None,
) -> ApproximationResult:
    """r = |F| - 1 для найденного ациклического леса; при точном решателе h <= r < 6h"""
    pipeline = HybridizationPipeline(solver=solver, threads=threads, max_vertices=max_vertices)
    return pipeline.run(t1, t2, exact_h=exact_h)
