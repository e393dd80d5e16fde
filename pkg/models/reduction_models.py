"""
Pydantic модели редуцированной пары деревьев
"""
from typing import Dict, FrozenSet, Tuple

from pydantic import BaseModel, ConfigDict, Field, model_validator

from models.tree_models import PhyloTree


class ReducedChain(BaseModel):
    """Свёрнутая 2-цепочка (a, b) из P и исходная цепочка, которую она заменяет"""
    model_config = ConfigDict(frozen=True)

    a: str
    b: str
    original: Tuple[str, ...] = Field(min_length=3)

    @property
    def pair(self) -> Tuple[str, str]:
        return (self.a, self.b)

    @property
    def weight(self) -> int:
        """w(a, b) = n - 2"""
        return len(self.original) - 2


class ReducedInstance(BaseModel):
    """
    Редуцированная пара (S, S') с множеством P свёрнутых цепочек и их весами.
    subtree_map: свежая метка -> таксоны свёрнутого общего поддерева.
    """
    model_config = ConfigDict(frozen=True)

    s: PhyloTree
    s_prime: PhyloTree
    chains: Tuple[ReducedChain, ...] = Field(default_factory=tuple)
    subtree_map: Dict[str, FrozenSet[str]] = Field(default_factory=dict)

    @model_validator(mode="after")
    def _check_labels(self) -> "ReducedInstance":
        if self.s.leaf_labels != self.s_prime.leaf_labels:
            raise ValueError("Reduced trees must share their label set")
        for chain in self.chains:
            if not (self.s.has_label(chain.a) and self.s.has_label(chain.b)):
                raise ValueError(f"Reduced chain ({chain.a}, {chain.b}) is not in the reduced trees")
        return self

    @property
    def p(self) -> Tuple[Tuple[str, str], ...]:
        return tuple(chain.pair for chain in self.chains)

    @property
    def w(self) -> Dict[Tuple[str, str], int]:
        return {chain.pair: chain.weight for chain in self.chains}

    @property
    def chain_map(self) -> Dict[Tuple[str, str], Tuple[str, ...]]:
        return {chain.pair: chain.original for chain in self.chains}

    @property
    def reduced_taxa(self) -> FrozenSet[str]:
        """X'"""
        return self.s.taxa
