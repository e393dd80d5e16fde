"""
Pydantic модели лесов согласия, графа наследования и лесов цепочек
"""
from enum import Enum
from typing import Dict, FrozenSet, Iterable, List, Tuple

import networkx as nx
from pydantic import BaseModel, ConfigDict, Field, model_validator

from models.tree_models import RHO, PhyloTree


def _component_order(component: FrozenSet[str]) -> Tuple[int, str]:
    # ρ-компонента первая, остальные по наименьшему таксону
    if RHO in component:
        return (0, "")
    return (1, min(component))


class AgreementForest(BaseModel):
    """
    Разбиение {L_ρ, L_1, ..., L_k} множества X ∪ {ρ}.
    Компоненты упорядочены: сначала L_ρ, затем по наименьшей метке.
    """
    model_config = ConfigDict(frozen=True)

    components: Tuple[FrozenSet[str], ...]

    @model_validator(mode="after")
    def _check_partition(self) -> "AgreementForest":
        seen = set()
        for component in self.components:
            if not component:
                raise ValueError("Empty forest component")
            overlap = seen & component
            if overlap:
                raise ValueError(f"Components overlap on {sorted(overlap)}")
            seen |= component
        if RHO not in seen:
            raise ValueError("Forest must contain the root label")
        if list(self.components) != sorted(self.components, key=_component_order):
            raise ValueError("Components are not in canonical order, use AgreementForest.create")
        return self

    @classmethod
    def create(cls, components: Iterable[Iterable[str]]) -> "AgreementForest":
        """Фабричный метод: приводит компоненты к каноническому порядку"""
        parts = [frozenset(c) for c in components]
        return cls(components=tuple(sorted(parts, key=_component_order)))

    @property
    def size(self) -> int:
        """|F|"""
        return len(self.components)

    @property
    def labels(self) -> FrozenSet[str]:
        return frozenset().union(*self.components)

    @property
    def rho_component(self) -> FrozenSet[str]:
        return self.components[0]

    def component_of(self, label: str) -> int:
        for i, component in enumerate(self.components):
            if label in component:
                return i
        raise KeyError(label)

    def is_singleton(self, label: str) -> bool:
        return len(self.components[self.component_of(label)]) == 1

    def name(self, index: int) -> str:
        """Имя компоненты для экспорта: rho или наименьший таксон"""
        component = self.components[index]
        return RHO if RHO in component else min(component)

    def to_dict(self) -> Dict[str, List[List[str]]]:
        return {"components": [sorted(c) for c in self.components]}

    @classmethod
    def from_dict(cls, data: Dict[str, List[List[str]]]) -> "AgreementForest":
        return cls.create(data["components"])


class InheritanceGraph(BaseModel):
    """
    Граф наследования G_F: вершины - индексы компонент леса,
    ребро (i, j) если корень T(L_i) - строгий предок корня T(L_j) в одном из деревьев.
    """
    model_config = ConfigDict(frozen=True)

    components: Tuple[FrozenSet[str], ...]
    edges: Tuple[Tuple[int, int], ...] = Field(default_factory=tuple)

    @model_validator(mode="after")
    def _check_edges(self) -> "InheritanceGraph":
        k = len(self.components)
        for i, j in self.edges:
            if i == j:
                raise ValueError("Inheritance graph has no self-loops")
            if not (0 <= i < k and 0 <= j < k):
                raise ValueError(f"Edge ({i}, {j}) outside component range")
        return self

    def to_networkx(self) -> nx.DiGraph:
        graph = nx.DiGraph()
        graph.add_nodes_from(range(len(self.components)))
        graph.add_edges_from(self.edges)
        return graph

    def out_neighbours(self, i: int) -> List[int]:
        return [j for a, j in self.edges if a == i]

    def in_degree(self, i: int) -> int:
        return sum(1 for _, j in self.edges if j == i)


class ForestFlavor(str, Enum):
    """Над какой парой деревьев построен лес цепочек"""
    OVER_S = "S"
    OVER_T = "T"


class ChainForest(BaseModel):
    """
    Лес цепочек B_S или B_T: по элементу на каждую общую цепочку
    и по синглетону на каждый таксон вне цепочек (включая ρ).
    """
    model_config = ConfigDict(frozen=True)

    flavor: ForestFlavor
    t1: PhyloTree
    t2: PhyloTree
    forest: AgreementForest
    chains: Tuple[Tuple[str, ...], ...]

    @model_validator(mode="after")
    def _check_chains(self) -> "ChainForest":
        components = set(self.forest.components)
        for chain in self.chains:
            if frozenset(chain) not in components:
                raise ValueError(f"Chain {chain} is not a forest component")
        return self

    @property
    def components(self) -> Tuple[FrozenSet[str], ...]:
        return self.forest.components

    @property
    def size(self) -> int:
        return self.forest.size

    @property
    def chain_lengths(self) -> Tuple[int, ...]:
        return tuple(len(chain) for chain in self.chains)

    @property
    def s(self) -> int:
        """Число элементов вне цепочек"""
        return self.forest.size - len(self.chains)

    def chain_index(self, chain: Iterable[str]) -> int:
        wanted = frozenset(chain)
        for i, candidate in enumerate(self.chains):
            if frozenset(candidate) == wanted:
                return i
        raise KeyError(tuple(sorted(wanted)))
