"""
Исключения, общие для всех модулей.

Неверный аргумент — обычный ValueError; здесь только то, на что вызывающему
коду имеет смысл реагировать отдельно.
"""


class ConstructionUnsupported(ValueError):
    """Граф X_{p,m} с такими параметрами не строится; condition — какое условие нарушено."""

    def __init__(self, condition: str):
        self.condition = condition
        super().__init__(f"построение не поддерживается: {condition}")


class ResourceLimitError(MemoryError):
    pass


class IncompleteOrbitError(ValueError):
    """Орбита единицы под действием образующих меньше порядка группы."""

    def __init__(self, found: int, expected: int):
        self.found = found
        self.expected = expected
        super().__init__(f"образующие порождают {found} элементов из {expected}")


class GraphFormatError(ValueError):
    pass


class ChecksumMismatch(GraphFormatError):
    pass


class ConvergenceError(ArithmeticError):
    def __init__(self, interval: tuple[float, float], iterations: int):
        self.interval = interval
        self.iterations = iterations
        super().__init__(
            f"Ланцош не сошёлся за {iterations} итераций, "
            f"последняя оценка в [{interval[0]:.10f}, {interval[1]:.10f}]"
        )


class UnsupportedGraphError(ValueError):
    pass
