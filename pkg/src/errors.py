"""Domain errors. Everything derives from ValueError so callers that only know
about bad input can still catch them generically."""


class ParseError(ValueError):
    pass


class AntisymmetryViolation(ValueError):
    def __init__(self, message: str, triple: tuple[int, int, int]):
        super().__init__(message)
        self.triple = triple


class JacobiViolation(ValueError):
    def __init__(self, message: str, triple: tuple[int, int, int]):
        super().__init__(message)
        self.triple = triple


class DimensionMismatch(ValueError):
    pass


class ArityMismatch(ValueError):
    pass


class IndexOutOfRange(IndexError, ValueError):
    pass


class NotHomogeneous(ValueError):
    pass


class NotInvariant(ValueError):
    pass


class NotClosed(ValueError):
    pass


class UnsolvableSystem(ValueError):
    pass


class NotInSubspace(ValueError):
    pass


class InvalidDifferentials(ValueError):
    pass


class NotInFiltration(ValueError):
    pass


class NotACocycle(ValueError):
    pass


class NotChainMap(ValueError):
    pass


class NotInKernel(ValueError):
    pass


class LiftFailed(ValueError):
    pass


class NonFiniteClosure(ValueError):
    pass


class NotDivisible(ValueError):
    pass


class DegreeBoundTooSmall(ValueError):
    pass
