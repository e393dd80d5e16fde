"""
Pydantic модели гибридизационных сетей и генераторов
"""
from collections import Counter
from typing import Dict, FrozenSet, List, Optional, Tuple

import networkx as nx
from pydantic import BaseModel, ConfigDict, Field, PrivateAttr, model_validator

from models.tree_models import RHO, PhyloTree


class HybridNetwork(BaseModel):
    """
    Корневой бинарный ациклический орграф с меткой ρ на корне (вершина 0).

    Допустимые типы вершин кроме корня: лист (вход 1 или 2, выход 0, с меткой),
    древесная вершина (вход 1, выход 2), ретикуляция (вход 2, выход не больше 1).
    """
    model_config = ConfigDict(frozen=True)

    children: Tuple[Tuple[int, ...], ...]
    labels: Dict[int, str]

    _parents: Tuple[Tuple[int, ...], ...] = PrivateAttr(default=())
    _topological: Tuple[int, ...] = PrivateAttr(default=())
    _vertex_of: Dict[str, int] = PrivateAttr(default_factory=dict)

    def model_post_init(self, __context) -> None:
        n = len(self.children)
        if n == 0 or self.labels.get(0) != RHO:
            raise ValueError("Vertex 0 must exist and carry the root label")
        parents: List[List[int]] = [[] for _ in range(n)]
        for v, kids in enumerate(self.children):
            for c in kids:
                if not 0 <= c < n:
                    raise ValueError(f"Edge to unknown vertex {c}")
                parents[c].append(v)

        if parents[0] or len(self.children[0]) > 1:
            raise ValueError("Root must have indegree 0 and outdegree at most 1")
        for v in range(1, n):
            indeg, outdeg = len(parents[v]), len(self.children[v])
            if indeg == 0:
                raise ValueError(f"Vertex {v} is a second root")
            if indeg > 2 or outdeg > 2:
                raise ValueError(f"Vertex {v} is not binary")
            if indeg == 2 and outdeg > 1:
                raise ValueError(f"Reticulation {v} has outdegree {outdeg}")
            if indeg == 1 and outdeg == 1:
                raise ValueError(f"Vertex {v} has indegree 1 and outdegree 1")
            if (outdeg == 0) != (v in self.labels):
                raise ValueError(f"Vertex {v}: leaves must be exactly the labelled vertices")

        # Kahn: порядок и проверка ацикличности
        remaining = [len(p) for p in parents]
        order: List[int] = []
        ready = [0]
        while ready:
            v = ready.pop()
            order.append(v)
            for c in reversed(self.children[v]):
                remaining[c] -= 1
                if remaining[c] == 0:
                    ready.append(c)
        if len(order) != n:
            raise ValueError("Network contains a directed cycle")

        vertex_of: Dict[str, int] = {}
        for v, label in self.labels.items():
            if label in vertex_of:
                raise ValueError(f"Duplicate label '{label}'")
            if v != 0 and label == RHO:
                raise ValueError("Root label used on a leaf")
            vertex_of[label] = v

        self._parents = tuple(tuple(p) for p in parents)
        self._topological = tuple(order)
        self._vertex_of = vertex_of

    @classmethod
    def from_tree(cls, tree: PhyloTree) -> "HybridNetwork":
        """Дерево как сеть без ретикуляций"""
        return cls(children=tree.children, labels=dict(tree.labels))

    @property
    def size(self) -> int:
        return len(self.children)

    def parents(self, v: int) -> Tuple[int, ...]:
        return self._parents[v]

    def topological_order(self) -> Tuple[int, ...]:
        return self._topological

    def is_leaf(self, v: int) -> bool:
        return v != 0 and not self.children[v]

    def label(self, v: int) -> Optional[str]:
        return self.labels.get(v)

    def vertex(self, label: str) -> int:
        return self._vertex_of[label]

    def reticulations(self) -> List[int]:
        return [v for v in range(self.size) if len(self._parents[v]) == 2]

    @property
    def taxa(self) -> FrozenSet[str]:
        return frozenset(label for label in self._vertex_of if label != RHO)

    def to_networkx(self) -> nx.MultiDiGraph:
        """Мультиграф с атрибутом label (None у немаркированных вершин)"""
        graph = nx.MultiDiGraph()
        for v in range(self.size):
            graph.add_node(v, label=self.labels.get(v))
        for v, kids in enumerate(self.children):
            for c in kids:
                graph.add_edge(v, c)
        return graph


class Generator(BaseModel):
    """
    r-генератор: скелет сети после удаления листьев и подавления вершин.

    edge_sides[i] - таксоны, подвешенные на ребре edges[i] (сверху вниз),
    node_sides - таксон под ретикуляцией выходной степени 0.
    """
    model_config = ConfigDict(frozen=True)

    root: int
    edges: Tuple[Tuple[int, int], ...]
    edge_sides: Tuple[Tuple[str, ...], ...]
    node_sides: Dict[int, Tuple[str, ...]] = Field(default_factory=dict)

    @model_validator(mode="after")
    def _check_degrees(self) -> "Generator":
        if len(self.edge_sides) != len(self.edges):
            raise ValueError("One side inventory per edge is required")
        indeg, outdeg = self._degrees()
        for v in set(indeg) | set(outdeg) | {self.root}:
            kind = (indeg.get(v, 0), outdeg.get(v, 0))
            if v == self.root:
                if kind != (0, 1):
                    raise ValueError(f"Generator root has degrees {kind}")
            elif kind not in ((2, 0), (2, 1), (1, 2)):
                raise ValueError(f"Generator vertex {v} has degrees {kind}")
        return self

    def _degrees(self) -> Tuple[Counter, Counter]:
        indeg: Counter = Counter(v for _, v in self.edges)
        outdeg: Counter = Counter(u for u, _ in self.edges)
        return indeg, outdeg

    def _count(self, kind: Tuple[int, int]) -> int:
        indeg, outdeg = self._degrees()
        vertices = set(indeg) | set(outdeg)
        return sum(1 for v in vertices if (indeg.get(v, 0), outdeg.get(v, 0)) == kind)

    @property
    def r0(self) -> int:
        """Ретикуляции с выходной степенью 0"""
        return self._count((2, 0))

    @property
    def r1(self) -> int:
        """Ретикуляции с выходной степенью 1"""
        return self._count((2, 1))

    @property
    def s(self) -> int:
        """Древесные вершины (вход 1, выход 2)"""
        return self._count((1, 2))

    @property
    def r(self) -> int:
        return self.r0 + self.r1

    @staticmethod
    def edge_count(r0: int, r1: int) -> int:
        """|E| = 4r0 + 3r1 - 1"""
        return 4 * r0 + 3 * r1 - 1

    @staticmethod
    def tree_vertex_count(r0: int, r1: int) -> int:
        """s = 2r0 + r1 - 1"""
        return 2 * r0 + r1 - 1
