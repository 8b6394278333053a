"""Exception hierarchy shared by all modules.

Every error carries an ``exit_code`` used by the CLI: 1 for invalid input,
2 for an internal inconsistency (the math says this cannot happen on valid
input), 3 for a size-limit refusal.
"""


class LoccError(Exception):
    """Base class for all library errors."""

    exit_code = 1


class MalformedInput(LoccError):
    """Input file or value does not match the documented schema."""


class DimensionMismatch(LoccError):
    """Vector/matrix/state dimensions are incompatible."""


class ZeroVector(LoccError):
    """A vector that must represent a state has (numerically) zero norm."""


class EntangledVector(LoccError):
    """A full vector has Schmidt rank >= 2 and cannot be factored."""

    def __init__(self, message, second_singular_value=None):
        super().__init__(message)
        self.second_singular_value = second_singular_value


class NotOrthogonal(LoccError):
    """Two states of a would-be orthogonal set are not orthogonal."""

    def __init__(self, i, j, residual):
        super().__init__(
            f"states {i} and {j} are not orthogonal (|<a_i|a_j><b_i|b_j>| = {residual:.3e})"
        )
        self.i = i
        self.j = j
        self.residual = residual


class DuplicateState(LoccError):
    """Two states of a set are equal up to phase (or share a label)."""

    def __init__(self, i, j, message=None):
        super().__init__(message or f"states {i} and {j} are equal up to phase")
        self.i = i
        self.j = j


class NotIrreducible(LoccError):
    """An operation that requires an irreducible set got a reducible one."""


class RemovedIsCenter(LoccError):
    """The removed state sits in the 1x1 center rectangle; no one-copy
    protocol exists for that removal."""


class InvalidParameter(LoccError):
    """A parameter is outside its documented domain."""


class NullspaceDimension(LoccError):
    """A nullspace does not have the dimension the operation requires."""

    def __init__(self, expected, got):
        super().__init__(f"expected nullspace dimension {expected}, got {got}")
        self.expected = expected
        self.got = got


class InvalidRepresentation(LoccError):
    """A rectangular representation violates its invariants or does not
    match the state set it is paired with."""


class IncompleteMeasurement(LoccError):
    """A measurement's outcome subspaces do not partition the local space."""


class Inconsistency(LoccError):
    """Numerical result contradicts a theorem that guarantees otherwise;
    indicates degenerate input or a tolerance failure, never classified
    silently."""

    exit_code = 2


class ComplementNotProduct(Inconsistency):
    """The unique completing vector of an (mn-1)-state set is entangled."""

    def __init__(self, second_singular_value):
        super().__init__(
            "completing vector has Schmidt rank >= 2 "
            f"(second singular value {second_singular_value:.3e}); "
            "this contradicts the extension theorem for mn-1 element sets"
        )
        self.second_singular_value = second_singular_value


class StructureViolation(Inconsistency):
    """A step of the constructive representation builder failed an
    assertion that holds for every irreducible 3x3 basis."""

    def __init__(self, step, detail):
        super().__init__(f"construction step {step}: {detail}")
        self.step = step
        self.detail = detail


class SizeLimit(LoccError):
    """Refusal to run an exhaustive procedure above its documented bound."""

    exit_code = 3
