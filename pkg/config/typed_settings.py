"""
Типизированные настройки на Pydantic Settings.

Значения читаются из окружения с префиксом HYBRID_ и из файла .env;
CLI берёт отсюда значения по умолчанию, явные флаги их переопределяют.
"""

from typing import Literal
from pydantic import Field, field_validator
from pydantic_settings import BaseSettings, SettingsConfigDict

from config.settings import (
    BRUTE_FORCE_MAX_CHAINS,
    BRUTE_FORCE_MAX_LEAVES,
    DEFAULT_APPROXIMATION_FACTOR,
    DEFAULT_SEED,
    DEFAULT_SOLVER,
    DEFAULT_THREADS,
    DISPLAY_MAX_RETICULATIONS,
    EXACT_DFVS_MAX_VERTICES,
    JSON_LOG_FILE,
)


class SolverSettings(BaseSettings):
    """Настройки решателей и оракулов с валидацией"""
    model_config = SettingsConfigDict(
        env_prefix='HYBRID_',
        env_file='.env',
        env_file_encoding='utf-8',
        case_sensitive=False,
        extra='ignore'
    )
    
    # DFVS
    solver: Literal["exact", "greedy"] = DEFAULT_SOLVER
    exact_dfvs_max_vertices: int = Field(
        default=EXACT_DFVS_MAX_VERTICES,
        ge=1,
        le=200,
        description="Макс. размер ядра для точного DFVS"
    )
    
    # Оракулы
    brute_force_max_leaves: int = Field(default=BRUTE_FORCE_MAX_LEAVES, ge=1, le=30)
    brute_force_max_chains: int = Field(default=BRUTE_FORCE_MAX_CHAINS, ge=0, le=30)
    display_max_reticulations: int = Field(default=DISPLAY_MAX_RETICULATIONS, ge=0, le=30)
    
    # Воспроизводимость
    seed: int = Field(default=DEFAULT_SEED, ge=0, description="Seed случайных корпусов")
    threads: int = Field(default=DEFAULT_THREADS, ge=1, le=256, description="Воркеры решателей")
    
    # Генератор деревьев из орграфа
    approximation_factor: float = Field(
        default=DEFAULT_APPROXIMATION_FACTOR,
        gt=1.0,
        description="c в формулах ℓ и L"
    )


class LoggingSettings(BaseSettings):
    """Настройки логирования с валидацией"""
    model_config = SettingsConfigDict(
        env_prefix='HYBRID_',
        env_file='.env',
        env_file_encoding='utf-8',
        case_sensitive=False,
        extra='ignore'
    )
    
    log_level: str = "WARNING"
    json_logging: bool = False
    json_log_file: str = JSON_LOG_FILE
    
    @field_validator('log_level')
    @classmethod
    def validate_level(cls, v: str) -> str:
        level = v.strip().upper()
        if level not in {"DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"}:
            raise ValueError(f'Unknown log level: {v}')
        return level


class Settings(BaseSettings):
    """Главный класс настроек, объединяющий все секции"""
    model_config = SettingsConfigDict(env_prefix='HYBRID_CONFIG_', extra='ignore')
    
    solver: SolverSettings = Field(default_factory=SolverSettings)
    logging: LoggingSettings = Field(default_factory=LoggingSettings)
    
    def validate_consistency(self) -> None:
        """Проверка консистентности настроек между собой"""
        if self.logging.json_logging and not self.logging.json_log_file:
            raise ValueError("Log file must be specified when JSON logging is enabled")


# Пример использования:
if __name__ == "__main__":
    try:
        settings = Settings()
        settings.validate_consistency()
        
        print("✅ Настройки загружены успешно:")
        print(f"  • Solver: {settings.solver.solver}")
        print(f"  • Exact DFVS cap: {settings.solver.exact_dfvs_max_vertices}")
        print(f"  • Threads: {settings.solver.threads}")
        print(f"  • Log Level: {settings.logging.log_level}")
        
    except Exception as e:
        print(f"❌ Ошибка валидации настроек: {e}")
