"""Exception types raised across the package.

Every exception carries enough context to reproduce the failure: the
offending parameters or a concrete witness.
"""
from __future__ import annotations


class UnitalForgeError(Exception):
    """Base class for all package errors."""


class CompositeCharacteristic(UnitalForgeError):
    """Raised when a field characteristic is not prime."""

    def __init__(self, p: int):
        self.p = p
        super().__init__(f"characteristic {p} is not prime")


class Overflow(UnitalForgeError):
    """Raised when a requested structure exceeds the table budget."""

    def __init__(self, what: str, size: int, budget: int):
        self.what = what
        self.size = size
        self.budget = budget
        super().__init__(f"{what} has size {size}, exceeding budget {budget}")


class OddCharacteristicRequired(UnitalForgeError):
    """Raised when a construction needs odd characteristic."""

    def __init__(self, p: int):
        self.p = p
        super().__init__(f"odd characteristic required, got {p}")


class DivisionByZero(UnitalForgeError):
    """Raised on inversion of zero."""

    def __init__(self, context: str = ""):
        self.context = context
        super().__init__(f"division by zero{': ' + context if context else ''}")


class InvalidParameters(UnitalForgeError):
    """Raised when arguments violate a documented precondition."""

    def __init__(self, message: str):
        super().__init__(message)


class SamePoint(UnitalForgeError):
    """Raised when two points expected to be distinct coincide."""

    def __init__(self, point):
        self.point = point
        super().__init__(f"points coincide: {point}")


class DegenerateTriple(UnitalForgeError):
    """Raised when a collinearity test receives a degenerate triple."""

    def __init__(self, points, reason: str):
        self.points = points
        self.reason = reason
        super().__init__(f"degenerate triple {points}: {reason}")


class NotClosed(UnitalForgeError):
    """Raised when a composite map fails its pointwise certification."""

    def __init__(self, witness):
        self.witness = witness
        super().__init__(f"composition check failed at {witness}")


class NotHomomorphism(UnitalForgeError):
    """Raised when a claimed homomorphism breaks on a witness pair."""

    def __init__(self, x, y):
        self.x = x
        self.y = y
        super().__init__(f"sigma(x*y) != sigma(x)*sigma(y) at x={x}, y={y}")


class NotSurjective(UnitalForgeError):
    """Raised when a claimed surjection misses an element."""

    def __init__(self, missed):
        self.missed = missed
        super().__init__(f"image does not contain {missed}")


class SizeMismatch(UnitalForgeError):
    """Raised when a constructed set has the wrong cardinality."""

    def __init__(self, what: str, expected: int, actual: int):
        self.what = what
        self.expected = expected
        self.actual = actual
        super().__init__(f"{what}: expected {expected} elements, got {actual}")


class PointInUnital(UnitalForgeError):
    """Raised when a tangency query is made at a point of the unital."""

    def __init__(self, point):
        self.point = point
        super().__init__(f"point {point} lies in the unital")


class HypothesisFailed(UnitalForgeError):
    """Raised when input fails the hypothesis a routine requires."""

    def __init__(self, message: str):
        super().__init__(message)


class CriterionMismatch(UnitalForgeError):
    """Raised when two independent routes to the same fact disagree."""

    def __init__(self, message: str, witness=None):
        self.witness = witness
        super().__init__(message)


class LemmaViolation(UnitalForgeError):
    """Raised when a certified mathematical fact fails computationally."""

    def __init__(self, message: str, witness=None):
        self.witness = witness
        super().__init__(message)


class NoObstructionFound(UnitalForgeError):
    """Raised when neither construction nor search yields an obstruction."""

    def __init__(self, q: int, j: int, detail: str):
        self.q = q
        self.j = j
        self.detail = detail
        super().__init__(f"no obstruction found for q={q}, j={j}: {detail}")


class UnknownExperiment(UnitalForgeError):
    """Raised when an experiment name is not registered."""

    def __init__(self, name: str, known):
        self.name = name
        self.known = sorted(known)
        super().__init__(f"unknown experiment {name!r}; known: {self.known}")


class IoFailure(UnitalForgeError):
    """Raised when reading or writing an external file fails."""

    def __init__(self, path: str, reason: str):
        self.path = path
        self.reason = reason
        super().__init__(f"{path}: {reason}")


class BudgetExceeded(UnitalForgeError):
    """Raised when group generation grows past its element budget."""

    def __init__(self, size: int, budget: int):
        self.size = size
        self.budget = budget
        super().__init__(f"group generation reached {size} elements, budget {budget}")
