"""Exception types shared across the package."""


class Error(Exception):
    """Base class for all library errors."""


# field construction and element encoding

class NonPrimeCharacteristic(Error):
    """The requested characteristic is not a prime number."""


class SizeLimit(Error):
    """The requested field size exceeds the configured cap."""


class CodeOutOfRange(Error):
    """An element code is not an integer in [0, q)."""


class ZeroInverse(Error):
    """Multiplicative inverse of zero requested."""


# polynomial algebra

class SpecMismatch(Error):
    """Operands belong to different fields."""


class DivisionByZeroPoly(Error):
    """Polynomial division by the zero polynomial."""


class ZeroPolynomial(Error):
    """Operation undefined for the zero polynomial."""


class NonMonic(Error):
    """Operation requires a monic polynomial."""


# plane point sets and direction machinery

class TooFewPoints(Error):
    """At least two points are needed to span a direction."""


class EmptySet(Error):
    """Operation undefined for an empty set."""


class SizeOutOfRange(Error):
    """Point-set size outside the range required by the operation."""


class PreconditionSize(Error):
    """Set size violates an explicit size precondition."""


class OnlyZeroDirection(Error):
    """The set spans only the zero direction; normalization impossible."""


class SlopeNotDetermined(Error):
    """The slope is not a direction of the set; structure parameters undefined."""


class AllOnOneLine(Error):
    """All points lie on a single line of the chosen slope."""


class DegenerateDirectionCount(Error):
    """Direction count is 1 or q+1; the two-sided bounds do not apply."""


class PointNotInSet(Error):
    """The given point does not belong to the set."""


class AllDirectionsSpanned(Error):
    """The set spans all q+1 directions; ghost counting does not apply."""


# affine group

class ZeroScale(Error):
    """Affine elements must have a nonzero scale coordinate."""


class IdentityElement(Error):
    """Operation undefined for the identity element."""


class NotSymmetric(Error):
    """The set is not closed under inversion."""


class MembershipViolation(Error):
    """The element does not lie in the stated product power."""


class TooSmall(Error):
    """The set is too small for classification."""


class BadExponent(Error):
    """Exponent outside the valid range."""


# harness

class BudgetExceeded(Error):
    """Exhaustive enumeration would exceed the configured budget."""

    def __init__(self, count, budget):
        super().__init__(f"enumeration of {count} candidates exceeds budget {budget}")
        self.count = count
        self.budget = budget


# text formats

class FormatError(Error):
    """Malformed input text; carries a line/column diagnostic."""

    def __init__(self, line, column, message):
        super().__init__(f"line {line}, column {column}: {message}")
        self.line = line
        self.column = column
