"""
Pydantic модели результатов конвейера аппроксимации
"""
from typing import Any, Dict, Optional

from pydantic import BaseModel, ConfigDict, Field

from models.forest_models import AgreementForest
from models.network_models import HybridNetwork


class RunReport(BaseModel):
    """Отчёт одного запуска: размеры промежуточных объектов и проверки оценок"""
    model_config = ConfigDict(frozen=True)

    instance: str = ""
    hybridization_number: int
    k: int = 0
    s: int = 0
    b_t_size: int = 0
    reduced_leaves: int = 0
    chains: int = 0
    solver: str = "exact"
    wall_time: float = 0.0
    exact_h: Optional[int] = None
    kernel_bound_ok: Optional[bool] = None
    chain_forest_bound_ok: Optional[bool] = None
    splitting_bound_ok: Optional[bool] = None

    def to_dict(self) -> Dict[str, Any]:
        return self.model_dump()

    def to_lines(self) -> Dict[str, str]:
        """Пары ключ-значение для текстового отчёта (None пропускается)"""
        lines: Dict[str, str] = {}
        for key, value in self.model_dump().items():
            if value is None or value == "":
                continue
            if isinstance(value, bool):
                value = "pass" if value else "fail"
            elif isinstance(value, float):
                value = f"{value:.3f}"
            lines[key] = str(value)
        return lines


class ApproximationResult(BaseModel):
    """r = |F| - 1, лес F на исходной паре, сеть, отчёт"""
    model_config = ConfigDict(frozen=True)

    hybridization_number: int = Field(ge=0)
    forest: AgreementForest
    network: HybridNetwork
    fvs_weight: int = 0
    report: RunReport
