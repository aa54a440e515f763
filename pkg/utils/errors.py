"""
errors.py
Исключения предметной области. Все они наследуются от ValueError: вызывающий код, которому не важна причина,
может перехватывать ValueError, а CLI и HTTP-маршруты различают их по типу и по структурированным полям.
"""


class TreeShiftError(ValueError):
    """Базовое исключение приложения."""


class TreeError(TreeShiftError):
    """Некорректное дерево или параметры семейства деревьев."""

    def __init__(self, message, violations=None):
        super().__init__(message)
        self.violations = list(violations or [])


class WeightError(TreeShiftError):
    """Веса не согласованы с деревом (нет веса, лишний вес, вес корня, нулевой вес)."""

    def __init__(self, message, vertex=None):
        super().__init__(message)
        self.vertex = vertex


class ConjugationError(TreeShiftError):
    """Матрица не задаёт сопряжение: не унитарна или не симметрична."""

    def __init__(self, message, residual_unitary=None, residual_symmetric=None):
        super().__init__(message)
        self.residual_unitary = residual_unitary
        self.residual_symmetric = residual_symmetric


class PhaseRecursionError(TreeShiftError):
    """Рекуррентное соотношение для фаз дало число, модуль которого не равен 1."""

    def __init__(self, message, sequence, step, modulus):
        super().__init__(message)
        self.sequence = sequence
        self.step = step
        self.modulus = modulus


class FamilyError(TreeShiftError):
    """Дерево или веса не принадлежат поддерживаемому семейству."""


class InfeasibleScheduleError(TreeShiftError):
    """Шаг индукции для векторов h_i невыполним: s² ≤ 0."""

    def __init__(self, message, step, deficit):
        super().__init__(message)
        self.step = step
        self.deficit = deficit


class BroomConstructionError(TreeShiftError):
    """Построенное частичное сопряжение на венике не прошло проверку."""

    def __init__(self, message, check, pair, residual, report=None):
        super().__init__(message)
        self.check = check
        self.pair = pair
        self.residual = residual
        self.report = report


class DocumentError(TreeShiftError):
    """Входной JSON-документ повреждён или не соответствует схеме."""

    def __init__(self, message, field=None):
        super().__init__(message)
        self.field = field
