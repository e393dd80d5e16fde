"""
Pydantic модели взвешенных орграфов для задач DFVS
"""
from typing import Dict, Iterable, Mapping, Optional, Tuple

import networkx as nx
from pydantic import BaseModel, ConfigDict, Field, model_validator

from models.forest_models import ChainForest


class WeightedDigraph(BaseModel):
    """
    Орграф с положительными целыми весами вершин.
    Кратные рёбра и петли допустимы; порядок вершин и рёбер сохраняется.
    """
    model_config = ConfigDict(frozen=True)

    vertices: Tuple[str, ...]
    weights: Dict[str, int]
    edges: Tuple[Tuple[str, str], ...] = Field(default_factory=tuple)

    @model_validator(mode="after")
    def _check_graph(self) -> "WeightedDigraph":
        names = set(self.vertices)
        if len(names) != len(self.vertices):
            raise ValueError("Duplicate vertex names")
        if set(self.weights) != names:
            raise ValueError("Weights must be given for exactly the declared vertices")
        for v, w in self.weights.items():
            if w < 1:
                raise ValueError(f"Vertex '{v}' has non-positive weight {w}")
        for u, v in self.edges:
            if u not in names or v not in names:
                raise ValueError(f"Edge ({u}, {v}) uses an undeclared vertex")
        return self

    @classmethod
    def create(
        cls,
        vertices: Iterable[str],
        edges: Iterable[Tuple[str, str]] = (),
        weights: Optional[Mapping[str, int]] = None,
    ) -> "WeightedDigraph":
        """Фабричный метод: вес по умолчанию 1"""
        names = tuple(vertices)
        given = dict(weights or {})
        return cls(
            vertices=names,
            weights={v: given.get(v, 1) for v in names},
            edges=tuple((u, v) for u, v in edges),
        )

    def weight_of(self, subset: Iterable[str]) -> int:
        return sum(self.weights[v] for v in set(subset))

    @property
    def total_weight(self) -> int:
        return sum(self.weights.values())

    def to_networkx(self) -> nx.DiGraph:
        """Простой орграф (кратные рёбра склеены, петли сохранены), вес в атрибуте weight"""
        graph = nx.DiGraph()
        for v in self.vertices:
            graph.add_node(v, weight=self.weights[v])
        graph.add_edges_from(self.edges)
        return graph

    def to_multigraph(self) -> nx.MultiDiGraph:
        graph = nx.MultiDiGraph()
        for v in self.vertices:
            graph.add_node(v, weight=self.weights[v])
        graph.add_edges_from(self.edges)
        return graph


class WeightExpansion(BaseModel):
    """Результат раздутия весов: невзвешенный граф и отображения копий"""
    model_config = ConfigDict(frozen=True)

    graph: WeightedDigraph
    origin: Dict[str, str]
    copies: Dict[str, Tuple[str, ...]]


class AuxiliaryGraph(BaseModel):
    """
    Вспомогательный граф G для леса цепочек B_T: по две вершины на цепочку
    (v веса n и v̄ веса 1, связанные 2-циклом), вершин для остальных таксонов нет.
    """
    model_config = ConfigDict(frozen=True)

    graph: WeightedDigraph
    chain_forest: ChainForest
    chain_vertex: Dict[str, int]
    barred: Dict[str, str]

    @property
    def s(self) -> int:
        return self.chain_forest.s

    def vertex_for_chain(self, index: int) -> str:
        for name, i in self.chain_vertex.items():
            if i == index:
                return name
        raise KeyError(index)

    def partner(self, barred_vertex: str) -> str:
        return self.barred[barred_vertex]
