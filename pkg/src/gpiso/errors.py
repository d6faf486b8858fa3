"""Exception types shared across the library.

Structured validation errors carry a witness (the first offending tuple)
so callers and tests can point at the exact broken axiom.
"""


class GpisoError(Exception):
    pass


class ValidationError(GpisoError):
    pass


class NotLatin(ValidationError):
    def __init__(self, axis, index):
        self.axis = axis  # "row" or "col"
        self.index = index
        super().__init__(f"{axis} {index} is not a permutation of the element set")


class NoIdentity(ValidationError):
    def __init__(self):
        super().__init__("element 0 is not a two-sided identity")


class NotAssociative(ValidationError):
    def __init__(self, a, b, c):
        self.witness = (a, b, c)
        super().__init__(f"associativity fails at ({a}, {b}, {c})")


class NotAbelian(GpisoError):
    pass


class NotNormal(GpisoError):
    pass


class NotCentral(GpisoError):
    pass


class TooLarge(GpisoError):
    """Oracle guard tripped; pass a larger guard explicitly to override."""


class BadAction(GpisoError):
    pass


class BadCocycle(GpisoError):
    pass


class DegreeMismatch(GpisoError):
    pass


class NotTransitive(GpisoError):
    pass


class NotAnAction(GpisoError):
    pass


class NotSubgroup(GpisoError):
    pass


class IndexGuardExceeded(GpisoError):
    pass


class EdgeMissing(GpisoError):
    pass


class DimensionMismatch(GpisoError):
    pass


class FieldMismatch(GpisoError):
    pass


class LengthMismatch(GpisoError):
    pass


class NotSystematic(GpisoError):
    pass


class NotCoprime(GpisoError):
    pass


class ModuliMismatch(GpisoError):
    pass


class ConstraintViolated(GpisoError):
    pass


class ShapeMismatch(GpisoError):
    pass


class NotInClass(GpisoError):
    """Input group is outside the class an isomorphism routine handles."""

    def __init__(self, reason):
        self.reason = reason
        super().__init__(reason)


class HypothesisFailed(GpisoError):
    pass


class ParseError(GpisoError):
    def __init__(self, line, message):
        self.line = line
        super().__init__(f"line {line}: {message}")
