import logging
import time
from functools import wraps
from typing import Any, Callable, TypeVar, cast

from config.settings import SLOW_OPERATION_THRESHOLD

T = TypeVar('T', bound=Callable[..., Any])


def _logger_for(func: Callable[..., Any], args: tuple) -> logging.Logger:
    # Методы логируют через self.logger, функции - через логгер модуля
    owner_logger = getattr(args[0], 'logger', None) if args else None
    if isinstance(owner_logger, logging.Logger):
        return owner_logger
    return logging.getLogger(func.__module__)


def measure_latency(func: T) -> T:
    """
    Замер длительности тяжёлых вычислений (решатели, переборы, конвейер).
    WARNING, если вызов дольше SLOW_OPERATION_THRESHOLD секунд;
    ERROR с прошедшим временем, если вызов упал.
    """
    @wraps(func)
    def wrapper(*args, **kwargs) -> Any:
        started = time.perf_counter()
        try:
            result = func(*args, **kwargs)
        except Exception as e:
            _logger_for(func, args).error(
                f"{func.__qualname__} failed after {time.perf_counter() - started:.3f}s: {e}"
            )
            raise
        elapsed = time.perf_counter() - started
        if elapsed > SLOW_OPERATION_THRESHOLD:
            _logger_for(func, args).warning(f"Slow operation: {func.__qualname__} took {elapsed:.3f}s")
        return result

    return cast(T, wrapper)
