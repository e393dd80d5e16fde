"""
Леса согласия, граф наследования, ацикличность, леса цепочек и B_T-разбиения.
"""
from typing import Dict, FrozenSet, Iterable, List, Optional, Sequence, Set, Tuple

import networkx as nx

from config.logging import get_logger
from hybridization.errors import NotAgreementForestError, PreconditionError
from hybridization.phylo_core import (
    canonical_newick,
    common_chains,
    common_pendant_subtrees,
    embedding_vertices,
    require_same_taxa,
    restriction_root,
)
from models.forest_models import AgreementForest, ChainForest, ForestFlavor, InheritanceGraph
from models.graph_models import WeightedDigraph
from models.reduction_models import ReducedInstance
from models.tree_models import RHO, PhyloTree

logger = get_logger("hybridization.agreement_forest")


class ForestChecker:
    """
    Проверки леса относительно фиксированной пары деревьев.
    Условие (1) - совпадение канонических форм ограничений,
    условие (2) - непересечение вложений T(L_i) в каждом дереве.
    """

    def __init__(self, t1: PhyloTree, t2: PhyloTree):
        require_same_taxa(t1, t2)
        self.t1 = t1
        self.t2 = t2
        self.logger = get_logger("hybridization.agreement_forest")

    def check(self, forest: AgreementForest) -> None:
        """Бросает NotAgreementForestError с причиной"""
        labels = forest.labels
        expected = self.t1.leaf_labels
        if labels != expected:
            missing = sorted(expected - labels)
            extra = sorted(labels - expected)
            raise NotAgreementForestError(
                f"forest labels differ from the trees (missing {missing}, unknown {extra})"
            )

        for component in forest.components:
            if canonical_newick(self.t1, component) != canonical_newick(self.t2, component):
                raise NotAgreementForestError(
                    f"component {sorted(component)} induces different subtrees"
                )

        for index, tree in enumerate((self.t1, self.t2), start=1):
            owner: Dict[int, int] = {}
            for i, component in enumerate(forest.components):
                for v in embedding_vertices(tree, component):
                    if v in owner:
                        raise NotAgreementForestError(
                            f"components {sorted(forest.components[owner[v]])} and "
                            f"{sorted(component)} share vertex {v} of tree {index}"
                        )
                    owner[v] = i

    def is_agreement_forest(self, forest: AgreementForest) -> bool:
        try:
            self.check(forest)
        except NotAgreementForestError as e:
            self.logger.debug(f"Not an agreement forest: {e.reason}")
            return False
        return True

    def inheritance_edges(self, components: Sequence[FrozenSet[str]]) -> List[Tuple[int, int]]:
        """Рёбра (i, j): корень T(L_i) - строгий предок корня T(L_j) в одном из деревьев"""
        edges: Set[Tuple[int, int]] = set()
        for tree in (self.t1, self.t2):
            roots = [restriction_root(tree, component) for component in components]
            for i, ri in enumerate(roots):
                for j, rj in enumerate(roots):
                    if i != j and tree.is_ancestor(ri, rj):
                        edges.add((i, j))
        return sorted(edges)

    def inheritance_graph(self, forest: AgreementForest, validate: bool = True) -> InheritanceGraph:
        if validate:
            self.check(forest)
        return InheritanceGraph(
            components=forest.components,
            edges=tuple(self.inheritance_edges(forest.components)),
        )

    def is_acyclic_forest(self, forest: AgreementForest) -> bool:
        """Лес согласия с ацикличным графом наследования"""
        if not self.is_agreement_forest(forest):
            return False
        return is_acyclic(self.inheritance_graph(forest, validate=False))


def is_agreement_forest(forest: AgreementForest, t1: PhyloTree, t2: PhyloTree) -> bool:
    return ForestChecker(t1, t2).is_agreement_forest(forest)


def inheritance_graph(forest: AgreementForest, t1: PhyloTree, t2: PhyloTree) -> InheritanceGraph:
    """G_F с вершинами в каноническом порядке компонент"""
    return ForestChecker(t1, t2).inheritance_graph(forest)


def is_acyclic(graph: InheritanceGraph) -> bool:
    return nx.is_directed_acyclic_graph(graph.to_networkx())


def cycle_components(graph: InheritanceGraph) -> List[int]:
    """Индексы компонент, лежащих на каком-либо ориентированном цикле"""
    on_cycle: List[int] = []
    for scc in nx.strongly_connected_components(graph.to_networkx()):
        if len(scc) > 1:
            on_cycle.extend(scc)
    return sorted(on_cycle)


def find_cycle(graph: InheritanceGraph) -> Optional[List[int]]:
    try:
        edges = nx.find_cycle(graph.to_networkx())
    except nx.NetworkXNoCycle:
        return None
    return [u for u, _ in edges]


def inheritance_graph_to_digraph(graph: InheritanceGraph) -> WeightedDigraph:
    """Экспорт в формат орграфа: rho для ρ-компоненты, иначе наименьший таксон"""
    names = [RHO if RHO in c else min(c) for c in graph.components]
    return WeightedDigraph.create(
        names, edges=((names[i], names[j]) for i, j in graph.edges)
    )


# ----------------------------------------------------------------------
# Леса цепочек
# ----------------------------------------------------------------------

def _chain_forest(
    flavor: ForestFlavor,
    t1: PhyloTree,
    t2: PhyloTree,
    chains: Sequence[Tuple[str, ...]],
) -> ChainForest:
    in_chain = {label for chain in chains for label in chain}
    singletons = [[label] for label in sorted(t1.leaf_labels) if label not in in_chain]
    forest = AgreementForest.create([list(c) for c in chains] + singletons)
    return ChainForest(flavor=flavor, t1=t1, t2=t2, forest=forest, chains=tuple(chains))


def chain_forest(
    t1: PhyloTree, t2: PhyloTree, inst: ReducedInstance
) -> Tuple[ChainForest, ChainForest]:
    """
    (B_S, B_T). B_S - над (S, S'): по элементу на каждую пару из P и каждую
    нередуцированную общую 2-цепочку, остальные таксоны - синглетоны.
    B_T получается заменой редуцированных пар исходными цепочками.
    """
    require_same_taxa(t1, t2)
    pendant = common_pendant_subtrees(t1, t2)
    if pendant:
        raise PreconditionError(
            f"trees share common pendant subtrees {[sorted(p) for p in pendant]}; "
            "apply subtree reduction first"
        )
    if inst.subtree_map:
        raise PreconditionError("reduced instance carries subtree reductions")
    expanded = set(inst.s.taxa)
    for chain in inst.chains:
        expanded -= {chain.a, chain.b}
        expanded |= set(chain.original)
    if expanded != set(t1.taxa):
        raise PreconditionError("reduced instance does not belong to this tree pair")

    reduced_labels = {label for chain in inst.chains for label in chain.pair}
    unreduced: List[Tuple[str, ...]] = []
    for chain in common_chains(inst.s, inst.s_prime):
        if chain.length > 2:
            raise PreconditionError(f"common chain {chain.leaves} of length > 2 left after reduction")
        if reduced_labels.isdisjoint(chain.leaves):
            unreduced.append(chain.leaves)

    s_chains = [chain.pair for chain in inst.chains] + unreduced
    t_chains = [chain.original for chain in inst.chains] + unreduced
    order = sorted(range(len(t_chains)), key=lambda i: min(t_chains[i]))
    b_s = _chain_forest(ForestFlavor.OVER_S, inst.s, inst.s_prime, [s_chains[i] for i in order])
    b_t = _chain_forest(ForestFlavor.OVER_T, t1, t2, [t_chains[i] for i in order])
    logger.info(
        f"Chain forest built: {len(t_chains)} chains, s={b_t.s}, |B_T|={b_t.size}"
    )
    return b_s, b_t


def _chain_indices(b_t: ChainForest, atomize: Iterable[Sequence[str]]) -> List[int]:
    return sorted({b_t.chain_index(chain) for chain in atomize})


def splitting(b_t: ChainForest, atomize: Iterable[Sequence[str]]) -> AgreementForest:
    """Заменить выбранные элементы-цепочки синглетонами; ацикличность проверяет вызывающий"""
    indices = set(_chain_indices(b_t, atomize))
    atomized = {frozenset(b_t.chains[i]) for i in indices}
    parts: List[Iterable[str]] = []
    for component in b_t.components:
        if component in atomized:
            parts.extend([label] for label in component)
        else:
            parts.append(component)
    return AgreementForest.create(parts)
