"""
Гибридизационные сети: h(H), проверка отображения деревьев, построение сети
по ациклическому лесу согласия, извлечение r-генератора.
"""
import itertools
from typing import Dict, FrozenSet, List, Optional, Tuple

import networkx as nx

from config.logging import get_logger
from config.settings import DISPLAY_MAX_RETICULATIONS
from hybridization.agreement_forest import ForestChecker, find_cycle, is_acyclic
from hybridization.errors import CyclicForestError, DegenerateGeneratorError, SizeLimitExceededError
from hybridization.phylo_core import TreeBuilder, canonical_newick, embedding_vertices, lca, restriction_root
from models.forest_models import AgreementForest
from models.network_models import Generator, HybridNetwork
from models.tree_models import RHO, PhyloTree
from utils.monitoring import measure_latency

logger = get_logger("hybridization.network")


def hybridization_count(h: HybridNetwork) -> int:
    """h(H) = сумма (d^-(v) - 1) по вершинам кроме корня"""
    return sum(len(h.parents(v)) - 1 for v in range(1, h.size))


def reticulations(h: HybridNetwork) -> List[int]:
    return h.reticulations()


# ----------------------------------------------------------------------
# Отображение
# ----------------------------------------------------------------------

def _switching_tree(h: HybridNetwork, chosen: Dict[int, int], keep: FrozenSet[str]) -> PhyloTree:
    """Дерево переключения: у каждой ретикуляции оставлен один родитель"""
    builder = TreeBuilder()
    for v in range(h.size):
        label = h.labels.get(v) if v != 0 else None
        builder.add_leaf(label if label in keep else None)
    for v in range(1, h.size):
        parents = h.parents(v)
        parent = chosen[v] if len(parents) == 2 else parents[0]
        builder.attach(parent, v)
    top = h.children[0][0] if h.children[0] else None
    if top is not None:
        builder.detach(top)
    return builder.build(top)


@measure_latency
def displays(h: HybridNetwork, tree: PhyloTree) -> bool:
    """Перебор 2^h(H) переключений ретикуляций с каноническим сравнением"""
    if not tree.taxa <= h.taxa:
        return False
    retics = h.reticulations()
    if len(retics) > DISPLAY_MAX_RETICULATIONS:
        raise SizeLimitExceededError("reticulations", len(retics), DISPLAY_MAX_RETICULATIONS)
    target = canonical_newick(tree)
    keep = tree.taxa
    for choice in itertools.product((0, 1), repeat=len(retics)):
        chosen = {v: h.parents(v)[bit] for v, bit in zip(retics, choice)}
        if canonical_newick(_switching_tree(h, chosen, keep)) == target:
            return True
    return False


# ----------------------------------------------------------------------
# Построение сети по лесу
# ----------------------------------------------------------------------

class _NetworkDraft:
    """
    Изменяемая сеть и два переключения: для каждой ретикуляции запомнен
    родитель, выбираемый при отображении первого и второго дерева.
    """

    def __init__(self):
        self.children: List[List[int]] = [[]]
        self.parents: List[List[int]] = [[]]
        self.labels: Dict[int, str] = {0: RHO}
        self.side: Dict[int, Dict[int, int]] = {}

    def add_vertex(self, label: Optional[str] = None) -> int:
        v = len(self.children)
        self.children.append([])
        self.parents.append([])
        if label is not None:
            self.labels[v] = label
        return v

    def add_edge(self, u: int, v: int) -> None:
        self.children[u].append(v)
        self.parents[v].append(u)

    def in_parent(self, v: int, which: int) -> int:
        """Родитель v в переключении which"""
        if v in self.side:
            return self.side[v][which]
        return self.parents[v][0]

    def subdivide_above(self, v: int, which: int) -> int:
        """Новая вершина на ребре в v, используемом переключением which"""
        p = self.in_parent(v, which)
        w = self.add_vertex()
        self.children[p][self.children[p].index(v)] = w
        self.parents[w].append(p)
        self.parents[v][self.parents[v].index(p)] = w
        self.children[w].append(v)
        if v in self.side:
            for k, parent in self.side[v].items():
                if parent == p:
                    self.side[v][k] = w
        return w

    def freeze(self) -> HybridNetwork:
        return HybridNetwork(
            children=tuple(tuple(c) for c in self.children), labels=dict(self.labels)
        )


def _restricted_vertices(tree: PhyloTree, component: FrozenSet[str]) -> Dict[int, Optional[int]]:
    """Вершины T|L как вершины дерева -> родитель в T|L (None у корня)"""
    embedding = embedding_vertices(tree, component)
    kept = set()
    for v in embedding:
        branching = sum(1 for c in tree.children[v] if c in embedding) >= 2
        if branching or v in tree.labels:
            kept.add(v)
    parent_of: Dict[int, Optional[int]] = {}
    for v in kept:
        p = tree.parent(v)
        while p is not None and p in embedding and p not in kept:
            p = tree.parent(p)
        parent_of[v] = p if p is not None and p in kept else None
    return parent_of


def _restricted_clusters(tree: PhyloTree, parent_of: Dict[int, Optional[int]]) -> Dict[int, FrozenSet[str]]:
    clusters: Dict[int, set] = {v: set() for v in parent_of}
    for v in sorted(parent_of, key=tree.depth, reverse=True):
        if v in tree.labels:
            clusters[v].add(tree.labels[v])
        p = parent_of[v]
        if p is not None:
            clusters[p] |= clusters[v]
    return {v: frozenset(c) for v, c in clusters.items()}


class NetworkBuilder:
    """
    Сеть из ациклического леса: компоненты добавляются в топологическом
    порядке графа наследования. Для каждой новой компоненты в обоих
    деревьях находится ребро подвеса в уже построенной части, оба ребра
    подразделяются и соединяются новой ретикуляцией над корнем компоненты.
    """

    def __init__(self, t1: PhyloTree, t2: PhyloTree):
        self.trees = (t1, t2)
        self.checker = ForestChecker(t1, t2)
        self.logger = get_logger("hybridization.network")

    def build(self, forest: AgreementForest) -> HybridNetwork:
        graph = self.checker.inheritance_graph(forest)
        if not is_acyclic(graph):
            raise CyclicForestError(find_cycle(graph))
        order = list(nx.lexicographical_topological_sort(graph.to_networkx()))

        draft = _NetworkDraft()
        # Вершина дерева (для каждого из двух деревьев) -> вершина черновика
        image: Tuple[Dict[int, int], Dict[int, int]] = ({0: 0}, {0: 0})
        placed: set = set()
        for index in order:
            component = forest.components[index]
            piece_root = self._add_piece(draft, image, component)
            if RHO not in component:
                self._attach(draft, image, placed, component, piece_root)
            placed |= component

        network = draft.freeze()
        self.logger.info(
            f"Network built from {forest.size} components with "
            f"{hybridization_count(network)} reticulations"
        )
        return network

    def _add_piece(
        self,
        draft: _NetworkDraft,
        image: Tuple[Dict[int, int], Dict[int, int]],
        component: FrozenSet[str],
    ) -> Optional[int]:
        """Копия T1|L в черновике; вершины T2|L сопоставляются по кластерам"""
        t1, t2 = self.trees
        parent_of = _restricted_vertices(t1, component)
        clusters = _restricted_clusters(t1, parent_of)
        by_cluster: Dict[FrozenSet[str], int] = {}
        root: Optional[int] = None
        for v in sorted(parent_of, key=t1.depth):
            if v == 0:
                node = 0
            else:
                label = t1.labels.get(v)
                node = draft.add_vertex(label)
            image[0][v] = node
            by_cluster[clusters[v]] = node
            p = parent_of[v]
            if p is None:
                root = node
            else:
                draft.add_edge(image[0][p], node)

        parent_of2 = _restricted_vertices(t2, component)
        clusters2 = _restricted_clusters(t2, parent_of2)
        for v in parent_of2:
            image[1][v] = by_cluster[clusters2[v]]
        return None if root == 0 else root

    def _attach(
        self,
        draft: _NetworkDraft,
        image: Tuple[Dict[int, int], Dict[int, int]],
        placed: set,
        component: FrozenSet[str],
        piece_root: int,
    ) -> None:
        anchors = []
        for which, tree in enumerate(self.trees):
            anchor = self._anchor(tree, placed, component)
            if anchor is None:
                break
            anchors.append(anchor)
        if len(anchors) < 2:
            # Построена только ρ: компонента подвешивается обычным ребром
            draft.add_edge(0, piece_root)
            return

        reticulation = draft.add_vertex()
        draft.side[reticulation] = {}
        for which, (branch_vertex, sibling) in enumerate(anchors):
            w = draft.subdivide_above(image[which][sibling], which)
            image[which][branch_vertex] = w
            draft.add_edge(w, reticulation)
            draft.side[reticulation][which] = w
        draft.add_edge(reticulation, piece_root)

    @staticmethod
    def _anchor(
        tree: PhyloTree, placed: set, component: FrozenSet[str]
    ) -> Optional[Tuple[int, int]]:
        """
        (a, u): a - родитель T(L) в T|(placed ∪ L), u - вершина соседней ветви
        в T|placed. None, если в placed нет таксонов кроме ρ.
        """
        others = [label for label in placed if label != RHO]
        if not others:
            return None
        r = restriction_root(tree, component)
        child, a = r, tree.parent(r)
        while True:
            sibling = tree.sibling(child)
            hits = [
                tree.vertex(label)
                for label in others
                if tree.is_ancestor(sibling, tree.vertex(label)) or tree.vertex(label) == sibling
            ]
            if hits:
                return a, lca(tree, hits)
            child, a = a, tree.parent(a)


@measure_latency
def network_from_forest(forest: AgreementForest, t1: PhyloTree, t2: PhyloTree) -> HybridNetwork:
    """Сеть, отображающая t1 и t2, с h(H) <= |F| - 1"""
    return NetworkBuilder(t1, t2).build(forest)


# ----------------------------------------------------------------------
# Генератор
# ----------------------------------------------------------------------

def extract_generator(h: HybridNetwork) -> Generator:
    """
    Удалить листья и подавить вершины с входом 1 и выходом 1.
    Лист, висевший на подавленной вершине, попадает в сторону-ребро,
    лист под ретикуляцией - в сторону-вершину.
    """
    def is_leaf(v: int) -> bool:
        return h.is_leaf(v) and len(h.parents(v)) == 1

    def inner_children(v: int) -> List[int]:
        return [c for c in h.children[v] if not is_leaf(c)]

    if not inner_children(0):
        raise DegenerateGeneratorError(0, 0, 0)

    kept = set()
    for v in range(h.size):
        if is_leaf(v):
            continue
        indeg, outdeg = len(h.parents(v)), len(inner_children(v))
        if v == 0 or indeg == 2:
            kept.add(v)
        elif outdeg == 2:
            kept.add(v)
        elif outdeg == 0:
            raise DegenerateGeneratorError(v, indeg, outdeg)

    edges: List[Tuple[int, int]] = []
    sides: List[Tuple[str, ...]] = []
    node_sides: Dict[int, Tuple[str, ...]] = {}
    for v in h.topological_order():
        if v not in kept:
            continue
        if len(h.parents(v)) == 2:
            if h.is_leaf(v):
                node_sides[v] = (h.labels[v],)
            elif not inner_children(v):
                node_sides[v] = tuple(h.labels[c] for c in h.children[v])
        for c in inner_children(v):
            hanging: List[str] = []
            while c not in kept:
                hanging.extend(h.labels[x] for x in h.children[c] if is_leaf(x))
                c = inner_children(c)[0]
            edges.append((v, c))
            sides.append(tuple(hanging))

    generator = Generator(root=0, edges=tuple(edges), edge_sides=tuple(sides), node_sides=node_sides)
    logger.debug(
        f"Generator extracted: r0={generator.r0}, r1={generator.r1}, s={generator.s}, |E|={len(edges)}"
    )
    return generator
