"""
Упорядоченный map поверх пула процессов.
"""
from concurrent.futures import ProcessPoolExecutor
from typing import Callable, Iterable, List, TypeVar

from config.logging import get_logger

A = TypeVar('A')
R = TypeVar('R')

logger = get_logger("utils.parallel")


def ordered_map(func: Callable[[A], R], items: Iterable[A], threads: int = 1) -> List[R]:
    """
    Применить func ко всем items и вернуть результаты в порядке входа.
    threads <= 1 - последовательно в текущем процессе. func должна быть
    функцией верхнего уровня модуля (pickle).
    """
    work = list(items)
    if threads <= 1 or len(work) <= 1:
        return [func(item) for item in work]
    
    workers = min(threads, len(work))
    logger.debug(f"Dispatching {len(work)} tasks to {workers} worker processes")
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(func, work))
