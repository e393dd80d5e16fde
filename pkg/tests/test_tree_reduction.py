"""
Тесты кернелизации: редукция поддеревьев и цепочек, вес и легитимность лесов
"""
import pytest

from hybridization.agreement_forest import ForestChecker
from hybridization.errors import IllegitimateForestError, PreconditionError
from hybridization.io_formats import write_tree
from hybridization.oracles import brute_force_legitimate_weight
from hybridization.tree_reduction import (
    check_kernel_bound,
    expand_forest,
    expand_subtrees,
    forest_weight,
    is_legitimate,
    reduce_pair,
    reduce_subtrees,
    reduced_taxa,
)
from tests.fixtures import (
    CHAIN5_S,
    CHAIN5_S_PRIME,
    CHAIN5_T1,
    CHAIN5_T2,
    H2_T1,
    H2_T2,
    forest,
    pair,
)

SHARED_CHERRY = ("(((a,b),c),d);", "(((a,b),d),c);")


@pytest.fixture
def chain5():
    t1, t2 = pair(CHAIN5_T1, CHAIN5_T2)
    return t1, t2, reduce_pair(t1, t2)


class TestSubtreeReduction:
    def test_common_cherry_collapsed(self):
        inst = reduce_subtrees(*pair(*SHARED_CHERRY))
        assert inst.subtree_map == {"st1": frozenset({"a", "b"})}
        assert write_tree(inst.s) == "((c,st1),d);"
        assert write_tree(inst.s_prime) == "(c,(d,st1));"
        assert inst.chains == ()
        print("✅ Общая вишня свёрнута в st1")

    def test_identical_trees_collapse_to_leaf(self):
        inst = reduce_subtrees(*pair(H2_T1, H2_T1))
        assert reduced_taxa(inst) == frozenset({"st1"})
        assert inst.subtree_map["st1"] == frozenset({"a", "b", "c", "d"})

    def test_nothing_to_reduce(self):
        t1, t2 = pair(H2_T1, H2_T2)
        inst = reduce_pair(t1, t2)
        assert inst.subtree_map == {} and inst.chains == ()
        assert inst.s == t1 and inst.s_prime == t2

    def test_expand_subtrees(self):
        inst = reduce_subtrees(*pair(*SHARED_CHERRY))
        expanded = expand_subtrees(forest({"st1", "c"}, {"d"}), inst)
        assert expanded == forest({"a", "b", "c"}, {"d"})


class TestChainReduction:
    """Общая 5-цепочка c1..c5 сворачивается в (ca1, cb1) с весом 3"""

    def test_reduced_trees(self, chain5):
        _, _, inst = chain5
        assert write_tree(inst.s) == CHAIN5_S
        assert write_tree(inst.s_prime) == CHAIN5_S_PRIME
        print(f"✅ S = {CHAIN5_S}, S' = {CHAIN5_S_PRIME}")

    def test_chain_weight(self, chain5):
        _, _, inst = chain5
        assert inst.p == (("ca1", "cb1"),)
        assert inst.w == {("ca1", "cb1"): 3}
        assert inst.chain_map[("ca1", "cb1")] == ("c1", "c2", "c3", "c4", "c5")
        assert len(reduced_taxa(inst)) == 5

    def test_fresh_labels_avoid_taxa(self):
        t1, t2 = pair(
            CHAIN5_T1.replace("p", "ca1"),
            CHAIN5_T2.replace("p", "ca1"),
        )
        inst = reduce_pair(t1, t2)
        assert inst.p == (("ca2", "cb2"),), "ca1 уже занята таксоном"


class TestForestWeight:
    def test_surviving_chain(self, chain5):
        _, _, inst = chain5
        f = forest({"ca1", "cb1", "q", "r"}, {"p"})
        assert forest_weight(f, inst) == 1
        assert is_legitimate(f, inst)
        print("✅ w(F) = 1 для выжившей цепочки")

    def test_atomized_chain_adds_weight(self, chain5):
        _, _, inst = chain5
        f = forest({"q", "r"}, {"p"}, {"ca1"}, {"cb1"})
        assert forest_weight(f, inst) == 3 + 3
        assert is_legitimate(f, inst)

    def test_broken_chain_is_illegitimate(self, chain5):
        _, _, inst = chain5
        f = forest({"ca1", "q", "r"}, {"cb1"}, {"p"})
        assert ForestChecker(inst.s, inst.s_prime).is_agreement_forest(f)
        assert forest_weight(f, inst) == 2
        assert not is_legitimate(f, inst)
        with pytest.raises(IllegitimateForestError):
            expand_forest(f, inst)
        print("✅ Разорванная цепочка не легитимна")


class TestExpansion:
    def test_surviving_chain_expands_inside_component(self, chain5):
        t1, t2, inst = chain5
        expanded = expand_forest(forest({"ca1", "cb1", "q", "r"}, {"p"}), inst)
        assert expanded == forest({"c1", "c2", "c3", "c4", "c5", "q", "r"}, {"p"})
        assert ForestChecker(t1, t2).is_acyclic_forest(expanded)

    def test_atomized_chain_expands_to_singletons(self, chain5):
        t1, t2, inst = chain5
        f = forest({"q", "r"}, {"p"}, {"ca1"}, {"cb1"})
        expanded = expand_forest(f, inst)
        assert expanded.size - 1 == forest_weight(f, inst) == 6
        assert all(expanded.is_singleton(f"c{i}") for i in range(1, 6))
        assert ForestChecker(t1, t2).is_acyclic_forest(expanded)
        print(f"✅ Развёрнутый лес: |F| = {expanded.size}")


class TestKernelBound:
    def test_chain5_within_bound(self, chain5):
        _, _, inst = chain5
        assert check_kernel_bound(inst, 1)

    def test_h_zero_rejected(self, chain5):
        _, _, inst = chain5
        with pytest.raises(PreconditionError):
            check_kernel_bound(inst, 0)

    def test_corpus(self, tree_corpus):
        """|X'| < 9h и min w(F) по легитимным лесам равен h"""
        checked = 0
        for t1, t2, h in tree_corpus:
            inst = reduce_pair(t1, t2)
            if h >= 1:
                assert check_kernel_bound(inst, h), f"|X'| = {len(inst.reduced_taxa)}, h = {h}"
            weight, best = brute_force_legitimate_weight(inst)
            assert weight == h, f"вес {weight} при h = {h}"
            assert expand_forest(best, inst).size - 1 == h
            checked += 1
        print(f"✅ Проверено пар: {checked}")


if __name__ == "__main__":
    pytest.main([__file__, "-v", "-s"])
