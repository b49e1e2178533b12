"""Exception types shared across the package."""


class CsfPolyError(Exception):
    """Base class for errors raised by csfpoly."""


class ArityMismatch(CsfPolyError, ValueError):
    pass


class DuplicateTuple(CsfPolyError, ValueError):
    def __init__(self, tup, line: int | None = None):
        self.tuple = tup
        self.line = line
        where = f" (line {line})" if line is not None else ""
        super().__init__(f"duplicate tuple {tup}{where}")


class IndexOutOfRange(CsfPolyError, IndexError):
    pass


class EmptyPolynomial(CsfPolyError, ValueError):
    pass


class PolySyntaxError(CsfPolyError, ValueError):
    def __init__(self, message: str, line: int | None = None, source: str | None = None):
        self.line = line
        self.source = source
        prefix = ""
        if source is not None:
            prefix = f"{source}:{line}: " if line is not None else f"{source}: "
        elif line is not None:
            prefix = f"line {line}: "
        super().__init__(prefix + message)


class Univariate(CsfPolyError, ValueError):
    pass


class UnsupportedOrder(CsfPolyError, ValueError):
    pass


class InvalidThreshold(CsfPolyError, ValueError):
    pass


class NotPowerOfTwo(CsfPolyError, ValueError):
    pass


class DimensionUnsupported(CsfPolyError, ValueError):
    pass
