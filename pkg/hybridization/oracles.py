"""
Переборные оракулы для проверки оценок на малых экземплярах:
точный MAAF, лес согласия без ацикличности, оптимальное B_T-разбиение,
минимальный вес легитимного леса.
"""
import itertools
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from config.logging import get_logger
from config.settings import BRUTE_FORCE_MAX_CHAINS, BRUTE_FORCE_MAX_EDGES, BRUTE_FORCE_MAX_LEAVES
from hybridization.agreement_forest import ForestChecker, is_acyclic, splitting
from hybridization.errors import SizeLimitExceededError
from hybridization.phylo_core import require_same_taxa
from hybridization.tree_reduction import forest_weight, is_legitimate
from models.forest_models import AgreementForest, ChainForest, InheritanceGraph
from models.reduction_models import ReducedInstance
from models.tree_models import PhyloTree
from utils.monitoring import measure_latency
from utils.parallel import ordered_map

logger = get_logger("hybridization.oracles")


def cut_forest(tree: PhyloTree, cuts: Iterable[int]) -> Optional[AgreementForest]:
    """
    Лес, получаемый удалением рёбер над вершинами cuts.
    None, если какая-то часть осталась без листьев.
    """
    cut = set(cuts)
    owner: Dict[int, int] = {0: 0}
    parts: List[List[str]] = [[]]
    for v in tree.preorder():
        if v == 0:
            parts[0].append(tree.labels[0])
            continue
        if v in cut:
            owner[v] = len(parts)
            parts.append([])
        else:
            owner[v] = owner[tree.parent(v)]
        if tree.is_leaf(v):
            parts[owner[v]].append(tree.labels[v])
    if any(not part for part in parts):
        return None
    return AgreementForest.create(parts)


def _edges(tree: PhyloTree) -> List[int]:
    """Рёбра дерева, заданные нижней вершиной (включая ребро ρ)"""
    return [v for v in tree.preorder() if v != 0]


def _first_valid(task: Tuple[PhyloTree, PhyloTree, Tuple[int, ...], int, int, bool]) -> Optional[Tuple[int, ...]]:
    """Лексикографически первое подмножество размера size, начинающееся с edges[first]"""
    t1, t2, edges, size, first, acyclic = task
    checker = ForestChecker(t1, t2)
    rest = edges[first + 1:]
    for tail in itertools.combinations(rest, size - 1):
        subset = (edges[first],) + tail
        forest = cut_forest(t1, subset)
        if forest is None or not checker.is_agreement_forest(forest):
            continue
        if acyclic and not is_acyclic(checker.inheritance_graph(forest, validate=False)):
            continue
        return subset
    return None


def _search_forest(
    t1: PhyloTree, t2: PhyloTree, max_leaves: int, threads: int, acyclic: bool
) -> Tuple[int, AgreementForest]:
    require_same_taxa(t1, t2)
    if len(t1.taxa) > max_leaves:
        raise SizeLimitExceededError("taxa", len(t1.taxa), max_leaves)
    checker = ForestChecker(t1, t2)
    whole = AgreementForest.create([t1.leaf_labels])
    if checker.is_agreement_forest(whole):
        return 0, whole

    edges = tuple(_edges(t1))
    for size in range(1, len(edges) + 1):
        tasks = [(t1, t2, edges, size, first, acyclic) for first in range(len(edges) - size + 1)]
        for subset in ordered_map(_first_valid, tasks, threads):
            if subset is not None:
                forest = cut_forest(t1, subset)
                logger.debug(f"Brute force found a forest of size {forest.size} after {size} cuts")
                return forest.size - 1, forest
    raise AssertionError("singleton forest is always an acyclic agreement forest")


@measure_latency
def brute_force_maaf(
    t1: PhyloTree,
    t2: PhyloTree,
    max_leaves: int = BRUTE_FORCE_MAX_LEAVES,
    threads: int = 1,
) -> Tuple[int, AgreementForest]:
    """m_a = min |F| - 1 по ациклическим лесам согласия и лес-свидетель"""
    return _search_forest(t1, t2, max_leaves, threads, acyclic=True)


def brute_force_maf(
    t1: PhyloTree,
    t2: PhyloTree,
    max_leaves: int = BRUTE_FORCE_MAX_LEAVES,
    threads: int = 1,
) -> Tuple[int, AgreementForest]:
    """То же без требования ацикличности"""
    return _search_forest(t1, t2, max_leaves, threads, acyclic=False)


def exact_h(t1: PhyloTree, t2: PhyloTree, max_leaves: int = BRUTE_FORCE_MAX_LEAVES, threads: int = 1) -> int:
    return brute_force_maaf(t1, t2, max_leaves=max_leaves, threads=threads)[0]


@measure_latency
def brute_force_splitting(
    b_t: ChainForest, max_chains: int = BRUTE_FORCE_MAX_CHAINS
) -> Tuple[int, Tuple[Tuple[str, ...], ...]]:
    """
    Минимальный размер B_T-разбиения и атомизируемые цепочки.
    Подмножества перебираются по возрастанию размера леса, при равенстве - по маске.
    """
    count = len(b_t.chains)
    if count > max_chains:
        raise SizeLimitExceededError("chains", count, max_chains)
    extra = [len(chain) - 1 for chain in b_t.chains]
    added = [0] * (1 << count)
    for mask in range(1, 1 << count):
        low = mask & -mask
        added[mask] = added[mask ^ low] + extra[low.bit_length() - 1]

    checker = ForestChecker(b_t.t1, b_t.t2)
    for mask in sorted(range(1 << count), key=lambda m: (added[m], m)):
        atomize = [b_t.chains[i] for i in range(count) if mask >> i & 1]
        forest = splitting(b_t, atomize)
        graph = InheritanceGraph(
            components=forest.components, edges=tuple(checker.inheritance_edges(forest.components))
        )
        if is_acyclic(graph):
            return forest.size, tuple(atomize)
    raise AssertionError("atomizing every chain always gives an acyclic forest")


@measure_latency
def brute_force_legitimate_weight(
    inst: ReducedInstance, max_edges: int = BRUTE_FORCE_MAX_EDGES
) -> Tuple[int, AgreementForest]:
    """min w(F) по легитимным лесам (S, S'), перебор разрезов S по числу рёбер"""
    edges = _edges(inst.s)
    if len(edges) > max_edges:
        raise SizeLimitExceededError("edges", len(edges), max_edges)
    best: Optional[Tuple[int, AgreementForest]] = None
    for size in range(len(edges) + 1):
        # w(F) >= |F| - 1 = size
        if best is not None and size >= best[0]:
            break
        for subset in itertools.combinations(edges, size):
            forest = cut_forest(inst.s, subset)
            if forest is None or not is_legitimate(forest, inst):
                continue
            weight = forest_weight(forest, inst)
            if best is None or weight < best[0]:
                best = (weight, forest)
    assert best is not None
    return best
