"""
Иерархия исключений библиотеки.

InvalidInputError и его наследники соответствуют коду выхода 1 в CLI,
SizeLimitExceededError - коду выхода 2.
"""
from typing import Iterable, Optional, Sequence


class HybridizationError(Exception):
    """Базовое исключение библиотеки"""


class InvalidInputError(HybridizationError):
    """Входные данные нарушают формат или предусловие операции"""


class NewickSyntaxError(InvalidInputError):
    """Синтаксическая ошибка Newick/eNewick с позицией символа"""

    def __init__(self, message: str, position: int):
        self.position = position
        super().__init__(f"{message} at position {position}")


class NonBinaryTreeError(InvalidInputError):
    """Внутренняя вершина не имеет ровно двух детей"""

    def __init__(self, position: int, degree: int):
        self.position = position
        self.degree = degree
        super().__init__(
            f"Internal vertex closed at position {position} has {degree} children, expected 2"
        )


class DuplicateLabelError(InvalidInputError):
    """Метка листа встречается дважды"""

    def __init__(self, label: str):
        self.label = label
        super().__init__(f"Duplicate leaf label '{label}'")


class ReservedLabelError(InvalidInputError):
    """Во входе использована служебная метка корня"""

    def __init__(self, label: str):
        self.label = label
        super().__init__(f"Label '{label}' is reserved for the auxiliary root")


class DigraphFormatError(InvalidInputError):
    """Ошибка в текстовом формате орграфа"""

    def __init__(self, message: str, line_number: int):
        self.line_number = line_number
        super().__init__(f"Line {line_number}: {message}")


class LabelMismatchError(InvalidInputError):
    """Множества таксонов двух деревьев различаются"""

    def __init__(self, only_left: Iterable[str], only_right: Iterable[str]):
        self.only_left = sorted(only_left)
        self.only_right = sorted(only_right)
        super().__init__(
            f"Taxon sets differ: only in first {self.only_left}, only in second {self.only_right}"
        )


class UnknownLabelError(InvalidInputError):
    """Запрошены метки, которых нет в дереве"""

    def __init__(self, labels: Iterable[str]):
        self.labels = sorted(labels)
        super().__init__(f"Unknown labels: {self.labels}")


class NotAgreementForestError(InvalidInputError):
    """Разбиение не является лесом согласия"""

    def __init__(self, reason: str):
        self.reason = reason
        super().__init__(f"Not an agreement forest: {reason}")


class CyclicForestError(InvalidInputError):
    """Граф наследования леса содержит цикл"""

    def __init__(self, cycle: Optional[Sequence[int]] = None):
        self.cycle = list(cycle) if cycle is not None else None
        suffix = f" through components {self.cycle}" if self.cycle else ""
        super().__init__(f"Inheritance graph has a directed cycle{suffix}")


class IllegitimateForestError(InvalidInputError):
    """Лес на редуцированной паре не легитимен"""

    def __init__(self, reason: str):
        self.reason = reason
        super().__init__(f"Forest is not legitimate: {reason}")


class NotFeedbackVertexSetError(InvalidInputError):
    """Множество вершин не разрывает все циклы"""

    def __init__(self, remaining_cycle: Sequence[str]):
        self.remaining_cycle = list(remaining_cycle)
        super().__init__(f"Not a feedback vertex set, cycle remains: {self.remaining_cycle}")


class PreconditionError(InvalidInputError):
    """Нарушено предусловие операции"""

    def __init__(self, reason: str):
        self.reason = reason
        super().__init__(reason)


class DegenerateGeneratorError(InvalidInputError):
    """При извлечении генератора осталась вершина недопустимого типа"""

    def __init__(self, vertex: int, indegree: int, outdegree: int):
        self.vertex = vertex
        self.indegree = indegree
        self.outdegree = outdegree
        super().__init__(
            f"Degenerate vertex {vertex} (in={indegree}, out={outdegree}) while extracting generator"
        )


class InvalidParamsError(InvalidInputError):
    """Недопустимые параметры генератора деревьев"""

    def __init__(self, reason: str):
        self.reason = reason
        super().__init__(f"Invalid generator parameters: {reason}")


class SizeLimitExceededError(HybridizationError):
    """Экземпляр больше лимита точного решателя или оракула"""

    def __init__(self, what: str, size: int, limit: int):
        self.what = what
        self.size = size
        self.limit = limit
        super().__init__(f"{what}: size {size} exceeds limit {limit}")
