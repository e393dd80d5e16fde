"""
Тесты DFVS: проверка, точный и жадный решатели, раздутие весов
"""
import itertools

import pytest

from hybridization.dfvs_core import (
    DfvsSolverFactory,
    ExactDfvsSolver,
    contract_fvs,
    exact_dfvs,
    expand_weighted,
    fvs_weight,
    greedy_dfvs,
    is_fvs,
    remaining_cycle,
    shortest_cycle,
)
from hybridization.errors import PreconditionError, SizeLimitExceededError, UnknownLabelError
from models.graph_models import WeightedDigraph
from tests.fixtures import SELF_LOOP, TRIANGLE, TWO_CYCLE, digraph

WEIGHTED_TWO_CYCLE = "v a 2\nv b 1\ne a b\ne b a\n"


def subset_minimum(g: WeightedDigraph) -> int:
    """Минимальный вес FVS полным перебором подмножеств"""
    best = g.total_weight
    for size in range(len(g.vertices) + 1):
        for subset in itertools.combinations(g.vertices, size):
            if g.weight_of(subset) < best and is_fvs(g, subset):
                best = g.weight_of(subset)
    return best


def complete_digraph(n: int) -> WeightedDigraph:
    names = [f"v{i}" for i in range(n)]
    return WeightedDigraph.create(names, edges=[(u, v) for u in names for v in names if u != v])


class TestFvsCheck:
    def test_triangle(self):
        g = digraph(TRIANGLE)
        assert not is_fvs(g, [])
        assert is_fvs(g, ["b"])
        assert remaining_cycle(g, []) == ["a", "b", "c"]
        assert remaining_cycle(g, ["a"]) is None

    def test_self_loop_is_a_cycle(self):
        g = digraph(SELF_LOOP)
        assert not is_fvs(g, [])
        assert is_fvs(g, ["v"])
        assert shortest_cycle(g) == ["v"]
        print("✅ Петля - цикл длины 1")

    def test_unknown_vertex(self):
        with pytest.raises(UnknownLabelError):
            is_fvs(digraph(TRIANGLE), ["z"])

    def test_acyclic_graph_needs_nothing(self):
        g = WeightedDigraph.create(["a", "b"], edges=[("a", "b")])
        assert is_fvs(g, [])
        assert exact_dfvs(g) == frozenset()
        assert greedy_dfvs(g) == frozenset()

    def test_weight(self):
        assert fvs_weight(digraph(WEIGHTED_TWO_CYCLE), ["a", "b"]) == 3


class TestExactSolver:
    """Точный решатель"""

    def test_hand_graphs(self):
        assert fvs_weight(digraph(TRIANGLE), exact_dfvs(digraph(TRIANGLE))) == 1
        assert exact_dfvs(digraph(SELF_LOOP)) == frozenset({"v"})
        assert len(exact_dfvs(digraph(TWO_CYCLE))) == 1
        print("✅ Треугольник, петля, 2-цикл")

    def test_prefers_light_vertex(self):
        assert exact_dfvs(digraph(WEIGHTED_TWO_CYCLE)) == frozenset({"b"})
        g = WeightedDigraph.create(
            ["a", "b", "c"],
            edges=[("a", "b"), ("b", "c"), ("c", "a")],
            weights={"a": 5, "b": 1, "c": 5},
        )
        assert exact_dfvs(g) == frozenset({"b"})

    def test_complete_digraph(self):
        g = complete_digraph(5)
        solution = exact_dfvs(g)
        assert len(solution) == 4 and is_fvs(g, solution)

    def test_component_limit(self):
        with pytest.raises(SizeLimitExceededError) as info:
            ExactDfvsSolver(max_vertices=3).solve(complete_digraph(4))
        assert info.value.limit == 3

    def test_threads_do_not_change_weight(self, digraph_corpus):
        joined = WeightedDigraph.create(
            [f"{i}_{v}" for i, g in enumerate(digraph_corpus[:6]) for v in g.vertices],
            edges=[(f"{i}_{u}", f"{i}_{v}") for i, g in enumerate(digraph_corpus[:6]) for u, v in g.edges],
            weights={f"{i}_{v}": w for i, g in enumerate(digraph_corpus[:6]) for v, w in g.weights.items()},
        )
        single = exact_dfvs(joined, threads=1)
        pooled = exact_dfvs(joined, threads=2)
        assert fvs_weight(joined, single) == fvs_weight(joined, pooled)
        assert is_fvs(joined, pooled)

    def test_matches_subset_enumeration(self, digraph_corpus):
        for g in digraph_corpus:
            solution = exact_dfvs(g)
            assert is_fvs(g, solution)
            assert fvs_weight(g, solution) == subset_minimum(g), f"граф {g.vertices}"
        print(f"✅ Точный решатель совпал с перебором на {len(digraph_corpus)} графах")


class TestGreedySolver:
    def test_feasible_and_not_better_than_exact(self, digraph_corpus):
        for g in digraph_corpus:
            solution = greedy_dfvs(g)
            assert is_fvs(g, solution)
            assert fvs_weight(g, solution) >= fvs_weight(g, exact_dfvs(g))

    def test_minimal(self, digraph_corpus):
        """Ни одну вершину жадного решения нельзя выбросить"""
        for g in digraph_corpus:
            solution = greedy_dfvs(g)
            for v in solution:
                assert not is_fvs(g, solution - {v})


class TestFactory:
    def test_available(self):
        assert DfvsSolverFactory.available() == ["exact", "greedy"]

    def test_create(self):
        solver = DfvsSolverFactory.create("greedy")
        assert solver.solve(digraph(SELF_LOOP)) == frozenset({"v"})

    def test_unknown_solver(self):
        with pytest.raises(ValueError):
            DfvsSolverFactory.create("annealing")


class TestWeightExpansion:
    """Раздутие весов и обратное сжатие"""

    def test_expand(self):
        expansion = expand_weighted(digraph(WEIGHTED_TWO_CYCLE))
        assert expansion.graph.vertices == ("a.1", "a.2", "b.1")
        assert len(expansion.graph.edges) == 4
        assert expansion.origin["a.2"] == "a"
        assert all(w == 1 for w in expansion.graph.weights.values())

    def test_contract(self):
        expansion = expand_weighted(digraph(WEIGHTED_TWO_CYCLE))
        assert contract_fvs({"a.1", "a.2"}, expansion) == frozenset({"a"})
        assert contract_fvs({"a.1"}, expansion) == frozenset()

    def test_self_loop_copies_form_clique(self):
        expansion = expand_weighted(digraph("v v 2\ne v v\n"))
        assert len(exact_dfvs(expansion.graph)) == 2

    def test_name_collision(self):
        g = WeightedDigraph.create(["a", "a.1"], weights={"a": 2})
        with pytest.raises(PreconditionError):
            expand_weighted(g)

    def test_unweighted_optimum_matches(self, digraph_corpus):
        for g in digraph_corpus:
            expansion = expand_weighted(g)
            f_prime = exact_dfvs(expansion.graph)
            contracted = contract_fvs(f_prime, expansion)
            assert len(f_prime) == fvs_weight(g, exact_dfvs(g))
            assert is_fvs(g, contracted)
            assert fvs_weight(g, contracted) == len(f_prime)
        print("✅ Оптимум раздутого графа равен взвешенному")


if __name__ == "__main__":
    pytest.main([__file__, "-v", "-s"])
