"""
Случайные экземпляры для тестов и команды sample: деревья, SPR-соседи,
пары деревьев и взвешенные орграфы. Генератор случайных чисел всегда
передаётся явно.
"""
import random
from typing import List, Optional, Sequence, Tuple

from config.logging import get_logger
from config.settings import DEFAULT_SEED
from hybridization.phylo_core import TreeBuilder
from models.graph_models import WeightedDigraph
from models.tree_models import PhyloTree

logger = get_logger("hybridization.corpus")

TreePair = Tuple[PhyloTree, PhyloTree]


def taxa_names(n_leaves: int) -> List[str]:
    return [f"t{i}" for i in range(1, n_leaves + 1)]


def random_tree(taxa: Sequence[str], rng: random.Random) -> PhyloTree:
    """Случайное слияние пар поддеревьев до одного корня"""
    builder = TreeBuilder()
    roots = [builder.add_leaf(label) for label in taxa]
    while len(roots) > 1:
        i, j = sorted(rng.sample(range(len(roots)), 2))
        right = roots.pop(j)
        left = roots.pop(i)
        roots.append(builder.add_vertex((left, right)))
    return builder.build(roots[0] if roots else None)


def _spr_move(tree: PhyloTree, rng: random.Random) -> PhyloTree:
    builder, top = TreeBuilder.from_tree(tree)
    prunable = [v for v in tree.preorder() if v not in (0, top)]
    v = rng.choice(prunable)
    p = tree.parent(v)
    inside = set(tree.subtree(v))
    # Подвес над p или над соседом v вернул бы то же дерево
    targets = [
        u for u in tree.preorder()
        if u != 0 and u not in inside and u not in (p, tree.sibling(v))
    ]
    if not targets:
        return tree
    u = rng.choice(targets)
    builder.detach(v)
    w = builder.hang_below(u, v)
    return builder.build(w if u == top else top)


def spr_neighbour(tree: PhyloTree, moves: int, rng: random.Random) -> PhyloTree:
    """moves случайных корневых SPR-ходов; деревья меньше чем с 3 листьями не меняются"""
    if len(tree.taxa) < 3:
        return tree
    for _ in range(moves):
        tree = _spr_move(tree, rng)
    return tree


def random_tree_pair(n_leaves: int, rng: random.Random, moves: Optional[int] = None) -> TreePair:
    """Пара на таксонах t1..tn: независимые деревья при moves=None, иначе SPR-сосед"""
    taxa = taxa_names(n_leaves)
    first = random_tree(taxa, rng)
    if moves is None:
        second = random_tree(taxa, rng)
    else:
        second = spr_neighbour(first, moves, rng)
    return first, second


def seeded_corpus(count: int, max_leaves: int, seed: int = DEFAULT_SEED) -> List[TreePair]:
    """Детерминированный набор пар с 3..max_leaves листьями"""
    rng = random.Random(seed)
    corpus: List[TreePair] = []
    for _ in range(count):
        n_leaves = rng.randint(3, max(3, max_leaves))
        moves = rng.choice((None, 1, 2, 3))
        corpus.append(random_tree_pair(n_leaves, rng, moves))
    logger.debug(f"Seeded corpus of {count} pairs generated with seed {seed}")
    return corpus


def random_digraph(
    n_vertices: int, edge_probability: float, max_weight: int, rng: random.Random
) -> WeightedDigraph:
    """Вершины v1..vn; петли с вероятностью edge_probability / 3"""
    vertices = [f"v{i}" for i in range(1, n_vertices + 1)]
    weights = {v: rng.randint(1, max_weight) for v in vertices}
    edges: List[Tuple[str, str]] = []
    for u in vertices:
        for v in vertices:
            chance = edge_probability / 3 if u == v else edge_probability
            if rng.random() < chance:
                edges.append((u, v))
    return WeightedDigraph.create(vertices, weights=weights, edges=edges)
