"""
Тесты прямой редукции: вспомогательный граф, переводы FVS <-> разбиение, конвейер
"""
import networkx as nx
import pytest

from hybridization.agreement_forest import ForestChecker, chain_forest, is_acyclic, splitting
from hybridization.dfvs_core import exact_dfvs, is_fvs
from hybridization.errors import CyclicForestError, NotFeedbackVertexSetError, PreconditionError
from hybridization.hybrid_to_dfvs import (
    HybridizationPipeline,
    approximate_hybridization,
    build_auxiliary_graph,
    fvs_to_splitting,
    normalize_fvs,
    splitting_to_fvs,
)
from hybridization.network import displays, hybridization_count
from hybridization.oracles import brute_force_splitting
from hybridization.tree_reduction import reduce_pair, reduce_subtrees
from tests.fixtures import (
    C3_T1,
    C3_T2,
    CHAIN5_T1,
    CHAIN5_T2,
    CYCLIC_T1,
    CYCLIC_T2,
    H1_T1,
    HAND_PAIRS,
    chain_subsets,
    pair,
)

# r, который даёт точный решатель на ручных парах
EXPECTED_R = {"h1": 2, "h2": 4, "chain5": 3, "cyclic": 3}


def auxiliary(first: str, second: str):
    t1, t2 = pair(first, second)
    b_s, b_t = chain_forest(t1, t2, reduce_pair(t1, t2))
    return b_s, b_t, build_auxiliary_graph(b_t, t1, t2)


def rotated(cycle):
    """Цикл, начинающийся с наименьшей вершины"""
    start = cycle.index(min(cycle))
    return tuple(cycle[start:] + cycle[:start])


class TestAuxiliaryGraph:
    """Граф G по лесу цепочек B_T"""

    def test_chain5(self):
        _, _, aux = auxiliary(CHAIN5_T1, CHAIN5_T2)
        assert aux.graph.weights == {"c1": 5, "c1.bar": 1, "q": 2, "q.bar": 1}
        assert len(aux.graph.edges) == 4
        assert aux.s == 2
        assert aux.graph.weight_of(exact_dfvs(aux.graph)) == 2
        print("✅ Две независимые цепочки: min FVS = 2")

    def test_c3_has_inheritance_edge(self):
        _, _, aux = auxiliary(C3_T1, C3_T2)
        assert aux.graph.vertices == ("c1", "c1.bar", "q", "q.bar")
        assert [aux.graph.weights[v] for v in aux.graph.vertices] == [3, 1, 2, 1]
        assert len(aux.graph.edges) == 5
        assert ("c1", "q") in aux.graph.edges
        assert aux.graph.weight_of(exact_dfvs(aux.graph)) == 2
        assert aux.s == 3

    def test_cyclic(self):
        _, _, aux = auxiliary(CYCLIC_T1, CYCLIC_T2)
        assert len(aux.graph.vertices) == 4 and len(aux.graph.edges) == 6
        assert {("a1", "b1"), ("b1", "a1")} <= set(aux.graph.edges)
        assert aux.graph.weight_of(exact_dfvs(aux.graph)) == 3
        assert aux.s == 1
        print("✅ 2-цикл между цепочками: min FVS = 3")

    def test_lookup_helpers(self):
        _, b_t, aux = auxiliary(CHAIN5_T1, CHAIN5_T2)
        assert aux.vertex_for_chain(1) == "q"
        assert aux.partner("q.bar") == "q"
        assert aux.chain_forest == b_t

    def test_chain_forest_over_s_rejected(self):
        t1, t2 = pair(CHAIN5_T1, CHAIN5_T2)
        b_s, _ = chain_forest(t1, t2, reduce_pair(t1, t2))
        with pytest.raises(PreconditionError):
            build_auxiliary_graph(b_s, t1, t2)


class TestTranslations:
    """FVS <-> B_T-разбиение"""

    def test_bars_keep_chains(self):
        _, b_t, aux = auxiliary(CHAIN5_T1, CHAIN5_T2)
        forest = fvs_to_splitting(aux, {"c1.bar", "q.bar"})
        assert forest == b_t.forest
        assert forest.size == 2 + aux.s

    def test_chain_vertex_atomizes(self):
        _, b_t, aux = auxiliary(CYCLIC_T1, CYCLIC_T2)
        forest = fvs_to_splitting(aux, {"a1", "b1.bar"})
        assert forest.size == 3 + aux.s
        assert forest.is_singleton("a1") and forest.is_singleton("a2")
        assert ForestChecker(b_t.t1, b_t.t2).is_acyclic_forest(forest)

    def test_normalize_drops_redundant_bar(self):
        _, _, aux = auxiliary(CHAIN5_T1, CHAIN5_T2)
        assert normalize_fvs(aux, {"c1", "c1.bar", "q.bar"}) == frozenset({"c1", "q.bar"})

    def test_not_an_fvs(self):
        _, _, aux = auxiliary(CHAIN5_T1, CHAIN5_T2)
        with pytest.raises(NotFeedbackVertexSetError):
            fvs_to_splitting(aux, {"c1.bar"})

    def test_splitting_to_fvs(self):
        _, b_t, aux = auxiliary(CYCLIC_T1, CYCLIC_T2)
        fvs = splitting_to_fvs(aux, [b_t.chains[0]])
        assert fvs == frozenset({"a1", "b1.bar"})
        assert is_fvs(aux.graph, fvs)

    def test_cyclic_splitting_rejected(self):
        _, _, aux = auxiliary(CYCLIC_T1, CYCLIC_T2)
        with pytest.raises(CyclicForestError):
            splitting_to_fvs(aux, [])

    def test_min_fvs_matches_min_splitting(self, tree_corpus):
        """k* + s равен размеру минимального B_T-разбиения"""
        for t1, t2, h in tree_corpus:
            if h == 0:
                continue
            kernel = reduce_subtrees(t1, t2)
            s1, s2 = kernel.s, kernel.s_prime
            _, b_t = chain_forest(s1, s2, reduce_pair(s1, s2))
            aux = build_auxiliary_graph(b_t, s1, s2)
            k = aux.graph.weight_of(exact_dfvs(aux.graph))
            size, atomized = brute_force_splitting(b_t)
            assert k + aux.s == size
            assert aux.graph.weight_of(splitting_to_fvs(aux, atomized)) == k
        print("✅ Переводы сохраняют k + s = |F|")

    def test_round_trip_on_corpus(self, chain_forest_corpus):
        """Каждое ацикличное разбиение B_T переходит в FVS веса |F| - s и обратно"""
        checked = 0
        for s1, s2, b_t in chain_forest_corpus:
            aux = build_auxiliary_graph(b_t, s1, s2)
            checker = ForestChecker(s1, s2)
            for atomized in chain_subsets(b_t.chains):
                forest = splitting(b_t, atomized)
                if not is_acyclic(checker.inheritance_graph(forest, validate=False)):
                    with pytest.raises(CyclicForestError):
                        splitting_to_fvs(aux, atomized)
                    continue
                fvs = splitting_to_fvs(aux, atomized)
                assert fvs_to_splitting(aux, fvs) == forest
                assert aux.graph.weight_of(fvs) + aux.s == forest.size
                checked += 1
        assert checked > 0
        print(f"✅ Разбиение -> FVS -> разбиение: {checked} разбиений")


class TestCycleCorrespondence:
    """Циклы G_{B_T} и циклы G без барированных вершин совпадают"""

    def test_on_corpus(self, chain_forest_corpus):
        with_cycles = 0
        for s1, s2, b_t in chain_forest_corpus:
            aux = build_auxiliary_graph(b_t, s1, s2)
            names = {
                b_t.forest.components.index(frozenset(chain)): aux.vertex_for_chain(i)
                for i, chain in enumerate(b_t.chains)
            }
            graph = ForestChecker(s1, s2).inheritance_graph(b_t.forest)

            forest_cycles = set()
            for cycle in nx.simple_cycles(graph.to_networkx()):
                assert all(c in names for c in cycle), "цикл G_{B_T} через не-цепочку"
                forest_cycles.add(rotated([names[c] for c in cycle]))

            aux_graph = nx.DiGraph()
            aux_graph.add_nodes_from(aux.graph.vertices)
            aux_graph.add_edges_from(aux.graph.edges)
            aux_cycles = {
                rotated(cycle)
                for cycle in nx.simple_cycles(aux_graph)
                if not any(v in aux.barred for v in cycle)
            }
            assert forest_cycles == aux_cycles
            with_cycles += bool(forest_cycles)
        assert with_cycles > 0, "в корпусе нет ни одного цикла"
        print(f"✅ Биекция циклов на {len(chain_forest_corpus)} лесах цепочек")


class TestPipeline:
    """Конвейер аппроксимации"""

    @pytest.mark.parametrize("name", sorted(EXPECTED_R))
    def test_hand_pairs(self, name):
        first, second, h = HAND_PAIRS[name]
        t1, t2 = pair(first, second)
        result = approximate_hybridization(t1, t2, exact_h=h)
        assert result.hybridization_number == EXPECTED_R[name]
        assert h <= result.hybridization_number < 6 * h
        print(f"✅ {name}: h = {h}, r = {result.hybridization_number}")

    def test_identical_trees(self):
        t1, t2 = pair(H1_T1, H1_T1)
        result = approximate_hybridization(t1, t2)
        assert result.hybridization_number == 0
        assert result.forest.size == 1
        assert hybridization_count(result.network) == 0

    def test_report_fields(self):
        t1, t2 = pair(CHAIN5_T1, CHAIN5_T2)
        report = approximate_hybridization(t1, t2, exact_h=1).report
        assert (report.k, report.s, report.b_t_size, report.chains) == (2, 2, 4, 2)
        assert report.reduced_leaves == 5
        assert report.kernel_bound_ok and report.chain_forest_bound_ok and report.splitting_bound_ok
        assert report.solver == "exact"
        assert report.to_lines()["kernel_bound_ok"] == "pass"

    def test_unknown_solver(self):
        with pytest.raises(ValueError):
            HybridizationPipeline(solver="annealing")

    @pytest.mark.parametrize("solver", ["exact", "greedy"])
    def test_sandwich_on_corpus(self, tree_corpus, solver):
        """h <= r, при точном решателе r < 6h; лес ацикличен, сеть отображает оба дерева"""
        for t1, t2, h in tree_corpus:
            result = approximate_hybridization(t1, t2, solver=solver, exact_h=h)
            r = result.hybridization_number
            assert h <= r
            if h == 0:
                assert r == 0
                continue
            if solver == "exact":
                assert r < 6 * h, f"r = {r} при h = {h}"
            report = result.report
            assert r == report.k + report.s - 1
            assert ForestChecker(t1, t2).is_acyclic_forest(result.forest)
            assert hybridization_count(result.network) <= r
            assert displays(result.network, t1) and displays(result.network, t2)
        print(f"✅ Оценки выполнены для решателя {solver}")


if __name__ == "__main__":
    pytest.main([__file__, "-v", "-s"])
