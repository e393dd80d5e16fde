"""
Pydantic модели деревьев: корневое бинарное филогенетическое дерево с корнем ρ
и общая цепочка двух деревьев
"""
from typing import Dict, FrozenSet, List, Optional, Tuple

from pydantic import BaseModel, ConfigDict, Field, PrivateAttr

from config.settings import RHO_LABEL

RHO = RHO_LABEL


class PhyloTree(BaseModel):
    """
    Корневое бинарное X-дерево с присоединённой корневой вершиной ρ.

    Вершины пронумерованы 0..n-1 в прямом порядке обхода, вершина 0 - ρ
    (исходящая степень не больше 1). labels хранит метки листьев и ρ.
    Деревья строятся через hybridization.phylo_core.TreeBuilder.
    """
    model_config = ConfigDict(frozen=True)

    children: Tuple[Tuple[int, ...], ...]
    labels: Dict[int, str]

    _parent: Tuple[Optional[int], ...] = PrivateAttr(default=())
    _vertex_of: Dict[str, int] = PrivateAttr(default_factory=dict)
    _preorder: Tuple[int, ...] = PrivateAttr(default=())
    _tin: Tuple[int, ...] = PrivateAttr(default=())
    _tout: Tuple[int, ...] = PrivateAttr(default=())
    _depth: Tuple[int, ...] = PrivateAttr(default=())

    def model_post_init(self, __context) -> None:
        n = len(self.children)
        if n == 0:
            raise ValueError("Tree must contain the root vertex")
        if self.labels.get(0) != RHO:
            raise ValueError("Vertex 0 must carry the root label")
        if len(self.children[0]) > 1:
            raise ValueError("Root vertex must have outdegree at most 1")

        parent: List[Optional[int]] = [None] * n
        for v, kids in enumerate(self.children):
            for c in kids:
                if not 0 < c < n or parent[c] is not None:
                    raise ValueError(f"Vertex {c} has an invalid or repeated parent")
                parent[c] = v
            if v != 0 and len(kids) not in (0, 2):
                raise ValueError(f"Vertex {v} has outdegree {len(kids)}")

        # Прямой обход итеративно: глубина гусениц бывает больше лимита рекурсии
        preorder: List[int] = []
        depth = [0] * n
        stack = [0]
        while stack:
            v = stack.pop()
            preorder.append(v)
            for c in reversed(self.children[v]):
                depth[c] = depth[v] + 1
                stack.append(c)
        if len(preorder) != n:
            raise ValueError("Tree is not connected")

        tin = [0] * n
        for i, v in enumerate(preorder):
            tin[v] = i
        size = [1] * n
        for v in reversed(preorder):
            if parent[v] is not None:
                size[parent[v]] += size[v]
        tout = [tin[v] + size[v] for v in range(n)]

        vertex_of: Dict[str, int] = {}
        for v, label in self.labels.items():
            if not 0 <= v < n:
                raise ValueError(f"Label on unknown vertex {v}")
            if v != 0 and self.children[v]:
                raise ValueError(f"Internal vertex {v} carries a label")
            if v != 0 and label == RHO:
                raise ValueError("Root label used on a leaf")
            if label in vertex_of:
                raise ValueError(f"Duplicate label '{label}'")
            vertex_of[label] = v
        for v in range(1, n):
            if not self.children[v] and v not in self.labels:
                raise ValueError(f"Leaf {v} has no label")

        self._parent = tuple(parent)
        self._vertex_of = vertex_of
        self._preorder = tuple(preorder)
        self._tin = tuple(tin)
        self._tout = tuple(tout)
        self._depth = tuple(depth)

    # ------------------------------------------------------------------
    # Структура
    # ------------------------------------------------------------------

    @property
    def root(self) -> int:
        return 0

    @property
    def size(self) -> int:
        """Число вершин, включая ρ"""
        return len(self.children)

    @property
    def top(self) -> Optional[int]:
        """Исходный корень дерева (ребёнок ρ)"""
        return self.children[0][0] if self.children[0] else None

    def parent(self, v: int) -> Optional[int]:
        return self._parent[v]

    def is_leaf(self, v: int) -> bool:
        return v != 0 and not self.children[v]

    def label(self, v: int) -> Optional[str]:
        return self.labels.get(v)

    def vertex(self, label: str) -> int:
        return self._vertex_of[label]

    def has_label(self, label: str) -> bool:
        return label in self._vertex_of

    def depth(self, v: int) -> int:
        return self._depth[v]

    def preorder(self) -> Tuple[int, ...]:
        return self._preorder

    def subtree(self, v: int) -> Tuple[int, ...]:
        """Вершины поддерева v в прямом порядке (непрерывный отрезок обхода)"""
        return self._preorder[self._tin[v]:self._tout[v]]

    def is_ancestor(self, u: int, v: int) -> bool:
        """Строгий предок: u != v и путь u -> v существует"""
        return u != v and self._tin[u] < self._tin[v] < self._tout[u]

    def sibling(self, v: int) -> Optional[int]:
        p = self._parent[v]
        if p is None:
            return None
        others = [c for c in self.children[p] if c != v]
        return others[0] if others else None

    # ------------------------------------------------------------------
    # Метки
    # ------------------------------------------------------------------

    @property
    def taxa(self) -> FrozenSet[str]:
        """X: метки листьев без ρ"""
        return frozenset(label for label in self._vertex_of if label != RHO)

    @property
    def leaf_labels(self) -> FrozenSet[str]:
        """L(T) = X ∪ {ρ}"""
        return frozenset(self._vertex_of)

    def leaves(self) -> List[int]:
        return [v for v in self._preorder if self.is_leaf(v)]

    def cluster(self, v: int) -> FrozenSet[str]:
        """Таксоны под вершиной v"""
        return frozenset(
            self.labels[u] for u in self.subtree(v) if self.is_leaf(u)
        )


class Chain(BaseModel):
    """
    Общая цепочка (a1, ..., an) двух деревьев, снизу вверх.
    bottom_is_cherry: (a1, a2) - вишня в обоих деревьях.
    """
    model_config = ConfigDict(frozen=True)

    leaves: Tuple[str, ...] = Field(min_length=2)
    bottom_is_cherry: bool = False

    @property
    def length(self) -> int:
        return len(self.leaves)

    @property
    def label_set(self) -> FrozenSet[str]:
        return frozenset(self.leaves)
