"""
Ориентированное разрезающее множество вершин (DFVS): проверка, точный
решатель (ветви и границы с редукциями), жадная эвристика и раздутие весов.
"""
from collections import deque
from typing import Dict, FrozenSet, Iterable, List, Optional, Sequence, Tuple, Union

import networkx as nx

from config.logging import get_logger
from config.settings import EXACT_DFVS_MAX_VERTICES
from hybridization.errors import PreconditionError, SizeLimitExceededError, UnknownLabelError
from models.graph_models import WeightExpansion, WeightedDigraph
from utils.monitoring import measure_latency
from utils.parallel import ordered_map

logger = get_logger("hybridization.dfvs")

INF = float("inf")


def _simple(g: Union[WeightedDigraph, nx.DiGraph]) -> nx.DiGraph:
    return g.to_networkx() if isinstance(g, WeightedDigraph) else g


def is_fvs(g: WeightedDigraph, f: Iterable[str]) -> bool:
    """G - F ацикличен (петли - циклы)"""
    chosen = set(f)
    unknown = chosen - set(g.vertices)
    if unknown:
        raise UnknownLabelError(unknown)
    graph = g.to_networkx()
    graph.remove_nodes_from(chosen)
    return nx.is_directed_acyclic_graph(graph)


def remaining_cycle(g: WeightedDigraph, f: Iterable[str]) -> Optional[List[str]]:
    graph = g.to_networkx()
    graph.remove_nodes_from(set(f))
    return shortest_cycle(graph)


def fvs_weight(g: WeightedDigraph, f: Iterable[str]) -> int:
    return g.weight_of(f)


def shortest_cycle(graph: Union[WeightedDigraph, nx.DiGraph]) -> Optional[List[str]]:
    """
    Кратчайший ориентированный цикл (петля - цикл длины 1).
    При равной длине - цикл через вершину, идущую раньше в порядке графа.
    """
    graph = _simple(graph)
    for v in graph.nodes:
        if graph.has_edge(v, v):
            return [v]
    best: Optional[List[str]] = None
    for scc in nx.strongly_connected_components(graph):
        if len(scc) < 2:
            continue
        for v in (u for u in graph.nodes if u in scc):
            cycle = _shortest_cycle_through(graph, v, scc, best)
            if cycle is not None and (best is None or len(cycle) < len(best)):
                best = cycle
                if len(best) == 2:
                    break
    if best is None:
        return None
    # Детерминированный порядок: от вершины, идущей раньше в графе
    order = {v: i for i, v in enumerate(graph.nodes)}
    start = min(range(len(best)), key=lambda i: order[best[i]])
    return best[start:] + best[:start]


def _shortest_cycle_through(
    graph: nx.DiGraph, v: str, scc: set, best: Optional[List[str]]
) -> Optional[List[str]]:
    """BFS от v обратно в v внутри сильно связной компоненты"""
    limit = len(best) if best is not None else None
    parent: Dict[str, str] = {}
    depth = {v: 0}
    queue = deque([v])
    while queue:
        u = queue.popleft()
        if limit is not None and depth[u] + 1 >= limit:
            return None
        for x in graph.successors(u):
            if x not in scc:
                continue
            if x == v:
                path = [u]
                while path[-1] != v:
                    path.append(parent[path[-1]])
                return list(reversed(path))
            if x not in depth:
                depth[x] = depth[u] + 1
                parent[x] = u
                queue.append(x)
    return None


# ----------------------------------------------------------------------
# Точный решатель
# ----------------------------------------------------------------------

class _Reduction:
    """
    Правила кернелизации на nx.DiGraph с атрибутом weight:
    удаление вершин без входов или выходов, петля - вершина обязательна,
    единственный вход/выход не тяжелее - обход вершины, висячий 2-цикл -
    перенос веса. Вершины с весом inf выбирать нельзя.
    """

    def __init__(self, graph: nx.DiGraph):
        self.graph = graph
        self.forced: List[str] = []
        self.shifts: List[Tuple[str, str]] = []
        self.cost = 0
        self.feasible = True

    def weight(self, v: str):
        return self.graph.nodes[v]["weight"]

    def _force(self, v: str) -> None:
        if self.weight(v) == INF:
            self.feasible = False
            return
        self.forced.append(v)
        self.cost += self.weight(v)
        self.graph.remove_node(v)

    def run(self) -> "_Reduction":
        g = self.graph
        changed = True
        while changed and self.feasible:
            changed = False
            for v in list(g.nodes):
                if v not in g:
                    continue
                if g.has_edge(v, v):
                    self._force(v)
                    if not self.feasible:
                        return self
                    changed = True
                    continue
                preds = set(g.predecessors(v))
                succs = set(g.successors(v))
                if not preds or not succs:
                    g.remove_node(v)
                    changed = True
                    continue
                if len(preds) == 1 and preds == succs:
                    (y,) = preds
                    if self.weight(v) >= self.weight(y):
                        self._force(y)
                        if not self.feasible:
                            return self
                    else:
                        # Всякое решение содержит v или y: v оплачивается заранее
                        g.nodes[y]["weight"] = self.weight(y) - self.weight(v)
                        self.cost += self.weight(v)
                        self.shifts.append((v, y))
                        g.remove_node(v)
                    changed = True
                    continue
                if len(preds) == 1:
                    (u,) = preds
                    if self.weight(u) <= self.weight(v):
                        g.add_edges_from((u, c) for c in succs)
                        g.remove_node(v)
                        changed = True
                        continue
                if len(succs) == 1:
                    (u,) = succs
                    if self.weight(u) <= self.weight(v):
                        g.add_edges_from((p, u) for p in preds)
                        g.remove_node(v)
                        changed = True
        return self

    def lift(self, solution: Iterable[str]) -> set:
        """Решение редуцированного графа -> решение исходного"""
        result = set(solution) | set(self.forced)
        for x, y in reversed(self.shifts):
            if y not in result:
                result.add(x)
        return result


def _packing_bound(graph: nx.DiGraph) -> float:
    """Нижняя оценка: упаковка непересекающихся кратчайших циклов"""
    g = graph.copy()
    bound = 0
    while True:
        cycle = shortest_cycle(g)
        if cycle is None:
            return bound
        bound += min(g.nodes[v]["weight"] for v in cycle)
        g.remove_nodes_from(cycle)


def _search(graph: nx.DiGraph, bound: float) -> Optional[Tuple[float, set]]:
    """Решение веса строго меньше bound или None"""
    reduction = _Reduction(graph.copy()).run()
    if not reduction.feasible or reduction.cost >= bound:
        return None
    g = reduction.graph
    cycle = shortest_cycle(g)
    if cycle is None:
        return reduction.cost, reduction.lift(())
    if reduction.cost + _packing_bound(g) >= bound:
        return None

    order = {v: i for i, v in enumerate(g.nodes)}
    candidates = sorted(cycle, key=lambda v: (g.nodes[v]["weight"], order[v]))
    best: Optional[Tuple[float, set]] = None
    excluded: List[str] = []
    for v in candidates:
        w = g.nodes[v]["weight"]
        if w == INF:
            continue
        child = g.copy()
        child.remove_node(v)
        for x in excluded:
            child.nodes[x]["weight"] = INF
        found = _search(child, bound - reduction.cost - w)
        if found is not None:
            total = reduction.cost + w + found[0]
            bound = total
            best = (total, found[1] | {v})
        excluded.append(v)
    if best is None:
        return None
    return best[0], reduction.lift(best[1])


def _solve_component(payload: Tuple[Sequence[Tuple[str, int]], Sequence[Tuple[str, str]]]) -> List[str]:
    """Точное решение одной сильно связной компоненты (функция верхнего уровня для пула)"""
    nodes, edges = payload
    component = WeightedDigraph.create(
        (v for v, _ in nodes), edges=edges, weights=dict(nodes)
    )
    incumbent = GreedyDfvsSolver().solve(component)
    graph = component.to_networkx()
    found = _search(graph, component.weight_of(incumbent))
    chosen = found[1] if found is not None else set(incumbent)
    order = {v: i for i, (v, _) in enumerate(nodes)}
    return sorted(chosen, key=order.__getitem__)


class ExactDfvsSolver:
    """
    Минимальное по весу FVS. Редукции, затем разбиение на сильно связные
    компоненты; каждая решается ветвями и границами по кратчайшему циклу
    с нижней оценкой упаковкой циклов. Лимит - размер наибольшей компоненты.
    """

    name = "exact"

    def __init__(self, max_vertices: Optional[int] = None, threads: int = 1):
        self.max_vertices = max_vertices if max_vertices is not None else EXACT_DFVS_MAX_VERTICES
        self.threads = threads
        self.logger = get_logger("hybridization.dfvs")

    @measure_latency
    def solve(self, g: WeightedDigraph) -> FrozenSet[str]:
        reduction = _Reduction(g.to_networkx()).run()
        reduced = reduction.graph
        components = [
            [v for v in reduced.nodes if v in scc]
            for scc in nx.strongly_connected_components(reduced)
            if len(scc) > 1
        ]
        components.sort(key=lambda c: g.vertices.index(c[0]))
        largest = max((len(c) for c in components), default=0)
        if largest > self.max_vertices:
            raise SizeLimitExceededError("strongly connected component", largest, self.max_vertices)

        payloads = [
            (
                [(v, reduced.nodes[v]["weight"]) for v in component],
                [(u, v) for u, v in reduced.subgraph(component).edges],
            )
            for component in components
        ]
        solutions = ordered_map(_solve_component, payloads, self.threads)
        result = frozenset(reduction.lift(v for solution in solutions for v in solution))
        self.logger.info(
            f"Exact DFVS solved: {len(g.vertices)} vertices, {len(components)} components "
            f"(largest {largest}), weight {g.weight_of(result)}"
        )
        return result


class GreedyDfvsSolver:
    """
    Жадно: пока есть цикл - взять кратчайший и удалить его вершину с
    минимальным weight / (indeg * outdeg) внутри сильно связной компоненты;
    затем удалить лишние вершины.
    """

    name = "greedy"

    def __init__(self, **_ignored):
        self.logger = get_logger("hybridization.dfvs")

    def solve(self, g: WeightedDigraph) -> FrozenSet[str]:
        graph = g.to_networkx()
        order = {v: i for i, v in enumerate(g.vertices)}
        chosen: List[str] = []
        while True:
            cycle = shortest_cycle(graph)
            if cycle is None:
                break
            scc = next(c for c in nx.strongly_connected_components(graph) if cycle[0] in c)
            sub = graph.subgraph(scc)

            def score(v: str) -> Tuple[float, int]:
                participation = max(sub.in_degree(v) * sub.out_degree(v), 1)
                return (g.weights[v] / participation, order[v])

            v = min(cycle, key=score)
            chosen.append(v)
            graph.remove_node(v)

        # Минимальность: сначала пробуем выбросить самые тяжёлые
        result = set(chosen)
        for v in sorted(chosen, key=lambda x: (-g.weights[x], order[x])):
            if is_fvs(g, result - {v}):
                result.discard(v)
        self.logger.debug(f"Greedy DFVS picked {len(result)} vertices of weight {g.weight_of(result)}")
        return frozenset(result)


class DfvsSolverFactory:
    """Фабрика решателей DFVS по имени"""

    _solvers = {
        ExactDfvsSolver.name: ExactDfvsSolver,
        GreedyDfvsSolver.name: GreedyDfvsSolver,
    }

    @staticmethod
    def create(name: str, **kwargs) -> Union[ExactDfvsSolver, GreedyDfvsSolver]:
        try:
            solver_class = DfvsSolverFactory._solvers[name]
        except KeyError:
            raise ValueError(
                f"Unknown DFVS solver '{name}', expected one of {sorted(DfvsSolverFactory._solvers)}"
            )
        return solver_class(**kwargs)

    @staticmethod
    def available() -> List[str]:
        return sorted(DfvsSolverFactory._solvers)


def exact_dfvs(g: WeightedDigraph, max_vertices: Optional[int] = None, threads: int = 1) -> FrozenSet[str]:
    return ExactDfvsSolver(max_vertices=max_vertices, threads=threads).solve(g)


@measure_latency
def greedy_dfvs(g: WeightedDigraph) -> FrozenSet[str]:
    return GreedyDfvsSolver().solve(g)


# ----------------------------------------------------------------------
# Раздутие весов
# ----------------------------------------------------------------------

def expand_weighted(g: WeightedDigraph) -> WeightExpansion:
    """v -> копии v.1 ... v.w(v); ребро (u, v) -> все рёбра (u.i, v.j)"""
    copies: Dict[str, Tuple[str, ...]] = {
        v: tuple(f"{v}.{i}" for i in range(1, g.weights[v] + 1)) for v in g.vertices
    }
    origin = {copy: v for v, names in copies.items() for copy in names}
    clash = set(origin) & set(g.vertices)
    if len(origin) != sum(len(c) for c in copies.values()) or clash:
        raise PreconditionError(f"copy names collide with existing vertices: {sorted(clash)}")

    vertices = [copy for v in g.vertices for copy in copies[v]]
    edges = [
        (a, b)
        for u, v in g.edges
        for a in copies[u]
        for b in copies[v]
    ]
    expanded = WeightedDigraph.create(vertices, edges=edges)
    logger.debug(f"Expanded {len(g.vertices)} weighted vertices into {len(vertices)} unit vertices")
    return WeightExpansion(graph=expanded, origin=origin, copies=copies)


def contract_fvs(f_prime: Iterable[str], expansion: WeightExpansion) -> FrozenSet[str]:
    """v входит в F, если в F' все его копии"""
    chosen = set(f_prime)
    return frozenset(
        v for v, names in expansion.copies.items() if all(copy in chosen for copy in names)
    )
