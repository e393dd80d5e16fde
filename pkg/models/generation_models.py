"""
Pydantic модели генератора пар деревьев из орграфа
"""
from enum import Enum
from fractions import Fraction
from typing import Optional, Tuple

from pydantic import BaseModel, ConfigDict, Field

from models.tree_models import PhyloTree


class GeneratorParams(BaseModel):
    """ℓ - длина x-цепочек, L - длина y/z-цепочек, c - множитель формул (если из формул)"""
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    ell: int = Field(ge=2)
    big_l: int = Field(ge=2)
    c: Optional[Fraction] = None

    @property
    def big_l_dominates(self) -> bool:
        return self.big_l > self.ell


class ChainKind(str, Enum):
    """Тип цепочки конструкции"""
    X = "x"
    Y = "y"
    Z = "z"


class ChainProvenance(BaseModel):
    """Происхождение цепочки: какую вершину D' или элемент D она кодирует"""
    model_config = ConfigDict(frozen=True)

    name: str
    kind: ChainKind
    labels: Tuple[str, ...]
    source: str


class GenerationResult(BaseModel):
    """Пара деревьев, построенная по орграфу, с реестром цепочек"""
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    t1: PhyloTree
    t2: PhyloTree
    params: GeneratorParams
    chains: Tuple[ChainProvenance, ...]

    @property
    def leaf_count(self) -> int:
        return len(self.t1.taxa)
