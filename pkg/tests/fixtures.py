"""
Ручные экземпляры с известными ответами и небольшие помощники
"""
from itertools import combinations
from typing import Iterable, Iterator, Sequence, Tuple

from hybridization.io_formats import parse_digraph, parse_tree
from models.forest_models import AgreementForest
from models.graph_models import WeightedDigraph
from models.tree_models import RHO, PhyloTree

# h = 1: одна ретикуляция над a
H1_T1 = "((a,b),c);"
H1_T2 = "(a,(b,c));"

# h = 2, общих цепочек нет
H2_T1 = "((a,b),(c,d));"
H2_T2 = "((a,c),(b,d));"

# Две общие цепочки (a1, a2) и (b1, b2, b3)
FIG2_T1 = "(((a1,a2),(x,y)),(((b1,z),b2),b3));"
FIG2_T2 = "(((a1,(x,z)),a2),(((b1,b2),b3),y));"

# Общая 5-цепочка c1..c5; после редукции P = {(ca1, cb1): 3}, h = 1
CHAIN5_T1 = "((((((c1,p),c2),c3),c4),c5),(q,r));"
CHAIN5_T2 = "(((((c1,c2),c3),c4),c5),((p,q),r));"
CHAIN5_S = "(((ca1,p),cb1),(q,r));"
CHAIN5_S_PRIME = "((ca1,cb1),((p,q),r));"

# Цепочки длины 3 и 2 с ребром наследования между ними
C3_T1 = "((((c1,(q,r)),c2),c3),(x,y));"
C3_T2 = "((((c1,c2),c3),y),((q,x),r));"

# Две 2-цепочки на 2-цикле графа наследования
CYCLIC_T1 = "((a1,(b1,b2)),a2);"
CYCLIC_T2 = "((b1,(a1,a2)),b2);"

# h = 1, но |B_T| = 5
BOUND_T1 = "(x,(y,((w1,(w2,m)),(z1,z2))));"
BOUND_T2 = "(x,(y,((w1,w2),(z1,(z2,m)))));"

# Сеть с двумя ретикуляциями
FIG1_NETWORK = "((a,(b)#H1),((#H1,(c)#H2),(#H2,d)));"

SELF_LOOP = "v v\ne v v\n"
TWO_CYCLE = "v u\nv v\ne u v\ne v u\n"
TRIANGLE = "v a\nv b\nv c\ne a b\ne b c\ne c a\n"

# Известные значения h
HAND_PAIRS = {
    "h1": (H1_T1, H1_T2, 1),
    "h2": (H2_T1, H2_T2, 2),
    "chain5": (CHAIN5_T1, CHAIN5_T2, 1),
    "cyclic": (CYCLIC_T1, CYCLIC_T2, 2),
    "bound": (BOUND_T1, BOUND_T2, 1),
}


def pair(first: str, second: str) -> Tuple[PhyloTree, PhyloTree]:
    return parse_tree(first), parse_tree(second)


def forest(*components: Iterable[str]) -> AgreementForest:
    """Лес из компонент; ρ добавляется в первую"""
    parts = [set(c) for c in components]
    parts[0].add(RHO)
    return AgreementForest.create(parts)


def digraph(text: str) -> WeightedDigraph:
    return parse_digraph(text)


def chain_subsets(chains: Sequence[Tuple[str, ...]]) -> Iterator[Tuple[Tuple[str, ...], ...]]:
    """Все наборы цепочек для атомизации, от пустого до полного"""
    for size in range(len(chains) + 1):
        yield from combinations(chains, size)
