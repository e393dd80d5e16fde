import random

import pytest

from config.settings import DEFAULT_SEED
from hybridization.agreement_forest import chain_forest
from hybridization.corpus import random_digraph, seeded_corpus
from hybridization.oracles import exact_h
from hybridization.tree_reduction import reduce_pair, reduce_subtrees
from tests.fixtures import HAND_PAIRS, pair

CORPUS_SIZE = 12
CORPUS_MAX_LEAVES = 7
DIGRAPH_COUNT = 30


@pytest.fixture(scope="session")
def tree_corpus():
    """Случайные пары деревьев с точным h (перебор) плюс ручные экземпляры"""
    cases = []
    for t1, t2 in seeded_corpus(CORPUS_SIZE, CORPUS_MAX_LEAVES, seed=DEFAULT_SEED):
        cases.append((t1, t2, exact_h(t1, t2)))
    for first, second, h in HAND_PAIRS.values():
        t1, t2 = pair(first, second)
        cases.append((t1, t2, h))
    return cases


@pytest.fixture(scope="session")
def digraph_corpus():
    """Случайные взвешенные орграфы: до 6 вершин, веса до 3"""
    rng = random.Random(DEFAULT_SEED)
    return [
        random_digraph(rng.randint(1, 6), 0.35, 3, rng)
        for _ in range(DIGRAPH_COUNT)
    ]


@pytest.fixture
def h1_pair():
    return pair(*HAND_PAIRS["h1"][:2])


@pytest.fixture
def h2_pair():
    return pair(*HAND_PAIRS["h2"][:2])


@pytest.fixture(scope="session")
def chain_forest_corpus(tree_corpus):
    """(S, S', B_T) для ядер корпуса без общих поддеревьев, h >= 1"""
    cases = []
    for t1, t2, h in tree_corpus:
        if h == 0:
            continue
        kernel = reduce_subtrees(t1, t2)
        s1, s2 = kernel.s, kernel.s_prime
        _, b_t = chain_forest(s1, s2, reduce_pair(s1, s2))
        cases.append((s1, s2, b_t))
    return cases
