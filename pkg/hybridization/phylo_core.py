"""
Структурные запросы к деревьям: построение, каноническая форма, ограничение,
общие висячие поддеревья, общие цепочки, предки.

Все обходы итеративные: деревья из генератора - длинные гусеницы.
"""
from typing import Dict, FrozenSet, Iterable, List, Mapping, Optional, Sequence, Set, Tuple

import networkx as nx

from config.logging import get_logger
from hybridization.errors import LabelMismatchError, UnknownLabelError
from models.tree_models import RHO, Chain, PhyloTree

logger = get_logger("hybridization.phylo_core")


class TreeBuilder:
    """
    Изменяемый черновик дерева. build() присоединяет ρ над указанной вершиной,
    удаляет немаркированные листья, подавляет унарные вершины и нумерует
    вершины в прямом порядке.
    """

    def __init__(self):
        self.children: List[List[int]] = []
        self.parent: List[Optional[int]] = []
        self.labels: Dict[int, str] = {}

    def add_leaf(self, label: Optional[str] = None) -> int:
        v = len(self.children)
        self.children.append([])
        self.parent.append(None)
        if label is not None:
            self.labels[v] = label
        return v

    def add_vertex(self, children: Sequence[int] = ()) -> int:
        v = self.add_leaf()
        for c in children:
            self.attach(v, c)
        return v

    def attach(self, parent: int, child: int) -> None:
        self.children[parent].append(child)
        self.parent[child] = parent

    def detach(self, v: int) -> None:
        p = self.parent[v]
        if p is not None:
            self.children[p].remove(v)
            self.parent[v] = None

    def subdivide(self, v: int) -> int:
        """Вставить новую вершину на ребро над v, вернуть её"""
        p = self.parent[v]
        w = self.add_leaf()
        if p is not None:
            slot = self.children[p].index(v)
            self.children[p][slot] = w
            self.parent[w] = p
        self.children[w].append(v)
        self.parent[v] = w
        return w

    def hang_below(self, leaf: int, subtree_root: int) -> int:
        """Подвесить поддерево на ребро, входящее в leaf"""
        w = self.subdivide(leaf)
        self.attach(w, subtree_root)
        return w

    def replace(self, old: int, new: int) -> None:
        """Поставить поддерево new на место вершины old"""
        p = self.parent[old]
        if p is not None:
            slot = self.children[p].index(old)
            self.children[p][slot] = new
            self.parent[new] = p
            self.parent[old] = None

    def find_root(self, v: int) -> int:
        while self.parent[v] is not None:
            v = self.parent[v]
        return v

    def build(self, top: Optional[int]) -> PhyloTree:
        if top is None:
            return PhyloTree(children=((),), labels={0: RHO})

        # Оставляем вершины, под которыми есть маркированный лист
        order: List[int] = []
        stack = [top]
        while stack:
            v = stack.pop()
            order.append(v)
            stack.extend(self.children[v])
        useful: Set[int] = set()
        for v in reversed(order):
            if (not self.children[v] and v in self.labels) or any(c in useful for c in self.children[v]):
                useful.add(v)
        if top not in useful:
            return PhyloTree(children=((),), labels={0: RHO})

        def skip_unary(v: int) -> int:
            while True:
                kept = [c for c in self.children[v] if c in useful]
                if len(kept) != 1 or (not self.children[v] and v in self.labels):
                    return v
                v = kept[0]

        new_children: List[List[int]] = [[]]
        labels: Dict[int, str] = {0: RHO}
        stack2: List[Tuple[int, int]] = [(skip_unary(top), 0)]
        while stack2:
            v, new_parent = stack2.pop()
            nid = len(new_children)
            new_children.append([])
            new_children[new_parent].append(nid)
            kids = [c for c in self.children[v] if c in useful]
            if not kids:
                labels[nid] = self.labels[v]
            for c in reversed(kids):
                stack2.append((skip_unary(c), nid))
        return PhyloTree(children=tuple(tuple(c) for c in new_children), labels=labels)

    @classmethod
    def from_tree(cls, tree: PhyloTree) -> Tuple["TreeBuilder", int]:
        """Черновик из дерева; возвращает (builder, вершина-ребёнок ρ). Номера вершин сохраняются"""
        builder = cls()
        for v in range(tree.size):
            builder.add_leaf(tree.labels.get(v) if v != 0 else None)
        for v in range(tree.size):
            for c in tree.children[v]:
                builder.attach(v, c)
        top = tree.top
        if top is not None:
            builder.detach(top)
        return builder, top


# ----------------------------------------------------------------------
# Каноническая форма
# ----------------------------------------------------------------------

def canonical_parts(
    children: Sequence[Sequence[int]],
    labels: Mapping[int, str],
    start: int,
    keep: Optional[FrozenSet[str]] = None,
) -> Dict[int, Tuple[str, str]]:
    """
    Для каждой вершины под start с хотя бы одним оставленным листом:
    (наименьшая метка, каноническая строка ограничения). Унарные после
    ограничения вершины проходят насквозь, ρ не пишется.
    """
    result: Dict[int, Tuple[str, str]] = {}
    stack: List[Tuple[int, bool]] = [(start, False)]
    while stack:
        v, done = stack.pop()
        kids = children[v]
        if not done:
            stack.append((v, True))
            stack.extend((c, False) for c in kids)
            continue
        if not kids:
            label = labels.get(v)
            if label is not None and label != RHO and (keep is None or label in keep):
                result[v] = (label, label)
            continue
        parts = sorted(result[c] for c in kids if c in result)
        if len(parts) == 1:
            result[v] = parts[0]
        elif parts:
            result[v] = (parts[0][0], "(" + ",".join(p[1] for p in parts) + ")")
    return result


def canonical_newick(tree: PhyloTree, labels: Optional[Iterable[str]] = None) -> str:
    """Канонический Newick дерева или его ограничения T|labels (ρ опущен)"""
    keep = frozenset(labels) if labels is not None else None
    start = tree.root if keep is None else restriction_root(tree, keep)
    parts = canonical_parts(tree.children, tree.labels, start, keep)
    if start not in parts:
        return ";"
    return parts[start][1] + ";"


# ----------------------------------------------------------------------
# Ограничение и предки
# ----------------------------------------------------------------------

def _check_labels(tree: PhyloTree, labels: Iterable[str]) -> FrozenSet[str]:
    wanted = frozenset(labels)
    missing = [label for label in wanted if not tree.has_label(label)]
    if missing:
        raise UnknownLabelError(missing)
    return wanted


def lca(tree: PhyloTree, vertices: Iterable[int]) -> int:
    """Наименьший общий предок множества вершин"""
    it = iter(vertices)
    try:
        current = next(it)
    except StopIteration:
        raise ValueError("LCA of an empty set")
    for v in it:
        a, b = current, v
        while tree.depth(a) > tree.depth(b):
            a = tree.parent(a)
        while tree.depth(b) > tree.depth(a):
            b = tree.parent(b)
        while a != b:
            a, b = tree.parent(a), tree.parent(b)
        current = a
    return current


def restriction_root(tree: PhyloTree, labels: Iterable[str]) -> int:
    """Корень T(X') в дереве: НОП листьев X' (ρ, если ρ ∈ X')"""
    wanted = _check_labels(tree, labels)
    if not wanted:
        raise ValueError("Restriction to an empty label set")
    return lca(tree, (tree.vertex(label) for label in wanted))


def embedding_vertices(tree: PhyloTree, labels: Iterable[str]) -> Set[int]:
    """Множество вершин T(X'): пути от листьев X' до их НОП"""
    wanted = _check_labels(tree, labels)
    top = restriction_root(tree, wanted)
    vertices = {top}
    for label in wanted:
        v = tree.vertex(label)
        while v != top and v not in vertices:
            vertices.add(v)
            v = tree.parent(v)
    return vertices


def restrict(tree: PhyloTree, labels: Iterable[str]) -> PhyloTree:
    """T|X': минимальное связывающее поддерево с подавленными вершинами степени 2"""
    wanted = _check_labels(tree, labels)
    if not wanted:
        raise ValueError("Restriction to an empty label set")
    builder, top = TreeBuilder.from_tree(tree)
    for v, label in tree.labels.items():
        if v != 0 and label not in wanted:
            del builder.labels[v]
    return builder.build(top)


def is_ancestor(tree: PhyloTree, u: int, v: int) -> bool:
    """Строгий предок (u = v - ложь)"""
    return tree.is_ancestor(u, v)


def relabel(tree: PhyloTree, mapping: Mapping[str, str]) -> PhyloTree:
    """Переименовать листья; метки вне mapping остаются"""
    labels = {v: (label if v == 0 else mapping.get(label, label)) for v, label in tree.labels.items()}
    return PhyloTree(children=tree.children, labels=labels)


def is_isomorphic(t1: PhyloTree, t2: PhyloTree) -> bool:
    """Изоморфизм с сохранением меток через каноническую форму"""
    return t1.leaf_labels == t2.leaf_labels and canonical_newick(t1) == canonical_newick(t2)


def require_same_taxa(t1: PhyloTree, t2: PhyloTree) -> None:
    if t1.leaf_labels != t2.leaf_labels:
        raise LabelMismatchError(t1.leaf_labels - t2.leaf_labels, t2.leaf_labels - t1.leaf_labels)


# ----------------------------------------------------------------------
# Общие висячие поддеревья
# ----------------------------------------------------------------------

def common_pendant_subtrees(t1: PhyloTree, t2: PhyloTree) -> List[FrozenSet[str]]:
    """
    Максимальные общие висячие поддеревья с не менее чем двумя листьями.
    Каноническая строка кодирует и множество меток, и топологию, поэтому
    совпадение строк означает общий кластер с изоморфными поддеревьями.
    """
    require_same_taxa(t1, t2)
    if t1.top is None:
        return []
    parts1 = canonical_parts(t1.children, t1.labels, t1.root)
    parts2 = canonical_parts(t2.children, t2.labels, t2.root)
    shapes2 = {parts2[v][1] for v in range(1, t2.size) if not t2.is_leaf(v)}

    found: List[FrozenSet[str]] = []
    stack = [t1.top]
    while stack:
        v = stack.pop()
        if t1.is_leaf(v):
            continue
        if parts1[v][1] in shapes2:
            found.append(t1.cluster(v))
            continue
        stack.extend(t1.children[v])
    found.sort(key=min)
    logger.debug(f"Found {len(found)} common pendant subtrees")
    return found


# ----------------------------------------------------------------------
# Цепочки
# ----------------------------------------------------------------------

class _ChainRelations:
    """Для каждого таксона: партнёр по вишне и лист-сосед родителя снизу вверх"""

    def __init__(self, tree: PhyloTree):
        self.cherry: Dict[str, str] = {}
        self.up: Dict[str, str] = {}
        for v in tree.leaves():
            label = tree.labels[v]
            sib = tree.sibling(v)
            if sib is not None and tree.is_leaf(sib):
                self.cherry[label] = tree.labels[sib]
            p = tree.parent(v)
            if p is None or p == tree.root:
                continue
            g = tree.parent(p)
            if g is None or g == tree.root:
                continue
            uncle = tree.sibling(p)
            if uncle is not None and tree.is_leaf(uncle):
                self.up[label] = tree.labels[uncle]

    def pair(self, a: str, b: str) -> bool:
        """(a, b) - 2-цепочка: вишня или родитель a - ребёнок родителя b"""
        return self.cherry.get(a) == b or self.up.get(a) == b

    def candidates(self, a: str) -> List[str]:
        return [b for b in (self.cherry.get(a), self.up.get(a)) if b is not None]


def is_chain(tree: PhyloTree, leaves: Sequence[str]) -> bool:
    """Предикат определения: (a1, ..., an) - цепочка дерева"""
    if len(leaves) < 2 or len(set(leaves)) != len(leaves) or RHO in leaves:
        return False
    if any(not tree.has_label(label) for label in leaves):
        return False
    parents = [tree.parent(tree.vertex(label)) for label in leaves]
    if parents[0] != parents[1] and tree.parent(parents[0]) != parents[1]:
        return False
    for i in range(1, len(leaves) - 1):
        if tree.parent(parents[i]) != parents[i + 1]:
            return False
    return all(p != tree.root for p in parents)


def common_chains(t1: PhyloTree, t2: PhyloTree) -> List[Chain]:
    """
    Максимальные общие цепочки, попарно непересекающиеся по листьям.

    Кандидат C(a1, a2) продлевается вверх, пока следующий лист - общий
    сосед сверху в обоих деревьях, и принимается, если его нельзя продлить
    вниз. Пересекаться могут только 2-цепочки; среди них выбирается
    максимальное паросочетание.
    """
    require_same_taxa(t1, t2)
    rel1, rel2 = _ChainRelations(t1), _ChainRelations(t2)

    def common_up(x: str) -> Optional[str]:
        y = rel1.up.get(x)
        return y if y is not None and rel2.up.get(x) == y else None

    below: Dict[str, List[str]] = {}
    for a, b in list(rel1.cherry.items()) + list(rel1.up.items()):
        below.setdefault(b, []).append(a)

    by_leaves: Dict[FrozenSet[str], Tuple[str, ...]] = {}
    for a1 in sorted(t1.taxa):
        for a2 in rel1.candidates(a1):
            if not rel2.pair(a1, a2):
                continue
            # Продлевается вниз - не максимальна
            if common_up(a1) == a2 and any(
                a0 != a2 and rel2.pair(a0, a1) for a0 in below.get(a1, ())
            ):
                continue
            chain = [a1, a2]
            nxt = common_up(a2)
            while nxt is not None and nxt not in chain:
                chain.append(nxt)
                nxt = common_up(nxt)
            key = frozenset(chain)
            if key not in by_leaves or tuple(chain) < by_leaves[key]:
                by_leaves[key] = tuple(chain)

    chains = sorted(by_leaves.values(), key=lambda c: min(c))
    chains = _resolve_overlaps(chains)
    result = [
        Chain(
            leaves=c,
            bottom_is_cherry=rel1.cherry.get(c[0]) == c[1] and rel2.cherry.get(c[0]) == c[1],
        )
        for c in chains
    ]
    logger.debug(f"Found {len(result)} maximal common chains")
    return result


def _resolve_overlaps(chains: List[Tuple[str, ...]]) -> List[Tuple[str, ...]]:
    """Пересекающиеся 2-цепочки: максимальное паросочетание на их листьях"""
    owner: Dict[str, int] = {}
    clashing: Set[int] = set()
    for i, chain in enumerate(chains):
        for label in chain:
            if label in owner:
                clashing.update((i, owner[label]))
            else:
                owner[label] = i
    if not clashing:
        return chains

    kept = [c for i, c in enumerate(chains) if i not in clashing]
    long_clashes = [chains[i] for i in clashing if len(chains[i]) > 2]
    if long_clashes:
        raise ValueError(f"Overlapping maximal chains of length > 2: {long_clashes}")

    graph = nx.Graph()
    pair_of: Dict[FrozenSet[str], Tuple[str, ...]] = {}
    for i in sorted(clashing):
        a, b = chains[i]
        graph.add_edge(a, b)
        pair_of[frozenset((a, b))] = chains[i]
    matching = nx.max_weight_matching(graph, maxcardinality=True)
    chosen = sorted((pair_of[frozenset(edge)] for edge in matching), key=min)
    logger.debug(f"Resolved {len(clashing)} overlapping 2-chains into {len(chosen)} disjoint ones")
    return sorted(kept + chosen, key=min)
