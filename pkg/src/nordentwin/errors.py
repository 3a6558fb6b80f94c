"""Exception hierarchy shared by every module."""


class NordenError(Exception):
    """Base class for all errors raised by this package."""


class StructuralError(NordenError, ValueError):
    """Shape, slot, variance or variable-list mismatch."""


class DegenerateMetricError(NordenError, ValueError):
    pass


class UnsupportedMetricError(NordenError, ValueError):
    """Metric with parameter-dependent entries; only rational metrics are inverted."""


class UnsupportedDimensionError(NordenError, ValueError):
    pass


class ValidationError(NordenError, ValueError):
    """A frame spec failed one of its structure conditions."""

    def __init__(self, condition: str, index: tuple | None = None, detail: str = ""):
        self.condition = condition
        self.index = index
        where = f" at {index}" if index is not None else ""
        msg = f"{condition} fails{where}"
        if detail:
            msg += f": {detail}"
        super().__init__(msg)


class ConsistencyError(NordenError, RuntimeError):
    """An identity that must hold by construction did not; signals a convention bug."""

    def __init__(self, name: str, index: tuple | None = None):
        self.name = name
        self.index = index
        where = f" (first violation at {index})" if index is not None else ""
        super().__init__(f"internal consistency check {name!r} failed{where}")


class ClassMismatchError(NordenError, ValueError):
    pass


class SpecParseError(NordenError, ValueError):
    def __init__(self, message: str, line: int | None = None, column: int | None = None):
        self.line = line
        self.column = column
        loc = []
        if line is not None:
            loc.append(f"line {line}")
        if column is not None:
            loc.append(f"column {column}")
        prefix = f"{', '.join(loc)}: " if loc else ""
        super().__init__(prefix + message)
