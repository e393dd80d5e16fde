"""
Кернелизация пары деревьев: редукция общих висячих поддеревьев, затем
редукция общих цепочек длины >= 3; вес и легитимность лесов редуцированной
пары и их развёртка обратно на исходные таксоны.
"""
from typing import Dict, FrozenSet, Iterable, List, Optional, Set, Tuple

from config.logging import get_logger
from config.settings import CHAIN_LABEL_PREFIXES, SUBTREE_LABEL_PREFIX
from hybridization.agreement_forest import ForestChecker
from hybridization.errors import IllegitimateForestError, PreconditionError
from hybridization.phylo_core import (
    TreeBuilder,
    common_chains,
    common_pendant_subtrees,
    relabel,
    require_same_taxa,
    restrict,
    restriction_root,
)
from models.forest_models import AgreementForest
from models.reduction_models import ReducedChain, ReducedInstance
from models.tree_models import PhyloTree

logger = get_logger("hybridization.tree_reduction")


class _FreshLabels:
    """Свежие метки с префиксом, не совпадающие с уже занятыми"""

    def __init__(self, used: Iterable[str]):
        self.used: Set[str] = set(used)
        self.counters: Dict[str, int] = {}

    def take(self, *prefixes: str) -> Tuple[str, ...]:
        """Одинаковый номер k для всех префиксов: ('ca3', 'cb3')"""
        key = ",".join(prefixes)
        k = self.counters.get(key, 0)
        while True:
            k += 1
            names = tuple(f"{prefix}{k}" for prefix in prefixes)
            if not any(name in self.used for name in names):
                break
        self.counters[key] = k
        self.used.update(names)
        return names


def _collapse(tree: PhyloTree, replacements: Dict[str, FrozenSet[str]]) -> PhyloTree:
    """Заменить каждое висячее поддерево (множество таксонов) листом со свежей меткой"""
    builder, top = TreeBuilder.from_tree(tree)
    for label, cluster in replacements.items():
        v = restriction_root(tree, cluster)
        leaf = builder.add_leaf(label)
        if v == top:
            top = leaf
        else:
            builder.replace(v, leaf)
    return builder.build(top)


def _subtree_step(
    t1: PhyloTree, t2: PhyloTree, fresh: _FreshLabels
) -> Tuple[PhyloTree, PhyloTree, Dict[str, FrozenSet[str]]]:
    subtree_map: Dict[str, FrozenSet[str]] = {}
    for cluster in common_pendant_subtrees(t1, t2):
        (label,) = fresh.take(SUBTREE_LABEL_PREFIX)
        subtree_map[label] = cluster
    if not subtree_map:
        return t1, t2, subtree_map
    return _collapse(t1, subtree_map), _collapse(t2, subtree_map), subtree_map


def reduce_subtrees(t1: PhyloTree, t2: PhyloTree) -> ReducedInstance:
    """Только редукция поддеревьев (P пусто)"""
    require_same_taxa(t1, t2)
    fresh = _FreshLabels(t1.leaf_labels)
    s1, s2, subtree_map = _subtree_step(t1, t2, fresh)
    logger.debug(f"Subtree reduction collapsed {len(subtree_map)} common pendant subtrees")
    return ReducedInstance(s=s1, s_prime=s2, subtree_map=subtree_map)


def reduce_pair(t1: PhyloTree, t2: PhyloTree) -> ReducedInstance:
    """
    Редукция поддеревьев до исчерпания, затем редукция цепочек:
    общая n-цепочка (a1, ..., an), n >= 3, заменяется 2-цепочкой (ca<k>, cb<k>)
    на месте (a1, a2) с весом n - 2.
    """
    require_same_taxa(t1, t2)
    fresh = _FreshLabels(t1.leaf_labels)
    s1, s2, subtree_map = _subtree_step(t1, t2, fresh)

    long_chains = [chain for chain in common_chains(s1, s2) if chain.length >= 3]
    reduced: List[ReducedChain] = []
    if long_chains:
        removed: Set[str] = set()
        names: Dict[str, str] = {}
        for chain in long_chains:
            a, b = fresh.take(*CHAIN_LABEL_PREFIXES)
            names[chain.leaves[0]] = a
            names[chain.leaves[1]] = b
            removed.update(chain.leaves[2:])
            reduced.append(ReducedChain(a=a, b=b, original=chain.leaves))
        keep = s1.leaf_labels - removed
        s1 = relabel(restrict(s1, keep), names)
        s2 = relabel(restrict(s2, keep), names)

    inst = ReducedInstance(s=s1, s_prime=s2, chains=tuple(reduced), subtree_map=subtree_map)
    logger.info(
        f"Reduced pair: |X|={len(t1.taxa)} -> |X'|={len(inst.reduced_taxa)}, "
        f"{len(subtree_map)} subtrees, {len(reduced)} chains"
    )
    return inst


def reduced_taxa(inst: ReducedInstance) -> FrozenSet[str]:
    """X'"""
    return inst.reduced_taxa


# ----------------------------------------------------------------------
# Лес редуцированной пары
# ----------------------------------------------------------------------

def _atomized(forest: AgreementForest, chain: ReducedChain) -> bool:
    return forest.is_singleton(chain.a) and forest.is_singleton(chain.b)


def _survives(forest: AgreementForest, chain: ReducedChain) -> bool:
    return forest.component_of(chain.a) == forest.component_of(chain.b)


def forest_weight(forest: AgreementForest, inst: ReducedInstance) -> int:
    """w(F) = |F| - 1 + сумма w(a, b) по атомизированным парам из P"""
    ForestChecker(inst.s, inst.s_prime).check(forest)
    return forest.size - 1 + sum(
        chain.weight for chain in inst.chains if _atomized(forest, chain)
    )


def _legitimacy_violation(forest: AgreementForest, inst: ReducedInstance) -> Optional[str]:
    checker = ForestChecker(inst.s, inst.s_prime)
    if not checker.is_agreement_forest(forest):
        return "not an agreement forest of the reduced pair"
    for chain in inst.chains:
        if not (_survives(forest, chain) or _atomized(forest, chain)):
            return f"reduced chain ({chain.a}, {chain.b}) neither survives nor is atomized"
    if not checker.is_acyclic_forest(forest):
        return "inheritance graph has a directed cycle"
    return None


def is_legitimate(forest: AgreementForest, inst: ReducedInstance) -> bool:
    return _legitimacy_violation(forest, inst) is None


def expand_subtrees(forest: AgreementForest, inst: ReducedInstance) -> AgreementForest:
    """Метки свёрнутых поддеревьев заменяются их таксонами"""
    parts = []
    for component in forest.components:
        part: Set[str] = set()
        for label in component:
            part |= inst.subtree_map.get(label, {label})
        parts.append(part)
    return AgreementForest.create(parts)


def expand_forest(forest: AgreementForest, inst: ReducedInstance) -> AgreementForest:
    """
    Легитимный лес (S, S') -> ациклический лес исходной пары с |F| - 1 = w(F):
    выжившая пара (a, b) заменяется всей цепочкой внутри своей компоненты,
    атомизированная - синглетонами всех листьев цепочки.
    """
    reason = _legitimacy_violation(forest, inst)
    if reason is not None:
        raise IllegitimateForestError(reason)

    expansion: Dict[str, Tuple[str, ...]] = {}
    extra: List[List[str]] = []
    for chain in inst.chains:
        if _survives(forest, chain):
            expansion[chain.a] = chain.original
            expansion[chain.b] = ()
        else:
            expansion[chain.a] = (chain.original[0],)
            expansion[chain.b] = (chain.original[1],)
            extra.extend([label] for label in chain.original[2:])

    parts: List[Set[str]] = []
    for component in forest.components:
        part: Set[str] = set()
        for label in component:
            part.update(expansion.get(label, (label,)))
        parts.append(part)
    chained = AgreementForest.create(parts + [set(e) for e in extra])
    return expand_subtrees(chained, inst)


def check_kernel_bound(inst: ReducedInstance, h: int) -> bool:
    """|X'| < 9h при h >= 1"""
    if h < 1:
        raise PreconditionError(f"kernel bound needs h >= 1, got {h}")
    return len(inst.reduced_taxa) < 9 * h
