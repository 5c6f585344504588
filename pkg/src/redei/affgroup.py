"""The affine group over GF(q) as pairs (a, b) with a nonzero, acting on the
field by x -> a*x + b, together with product-set growth machinery.

Composition is (a, b)(a', b') = (a*a', a*b' + b); the pair doubles as a plane
point, so vertical lines, stabilizer lines Stab(x) = {(a, (1-a)x)} and the
unipotent subgroup U = {(1, b)} all make sense both as sets of group elements
and as point sets.

Classification of a symmetric set A (A = A^{-1}, |A| > 1) by its tripling
constant C = |A^3|/|A| distinguishes three size regimes split at q and at
(3+2*sqrt(2))*q, the latter compared exactly through an integer square root.
Every report carries all the cases that were tested, since the cases overlap
and the overlap is informative in experiments.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import isqrt
from typing import Optional

from .errors import (
    BadExponent,
    EmptySet,
    IdentityElement,
    MembershipViolation,
    NotSymmetric,
    TooSmall,
    ZeroScale,
)
from .ff import Field
from .plane import INF, Slope

IDENTITY = (1, 0)


def check_element(field: Field, g) -> tuple[int, int]:
    a, b = g
    field.check(a)
    field.check(b)
    if a == 0:
        raise ZeroScale(f"affine element {g!r} has zero scale")
    return (a, b)


def aff_mul(field: Field, g, h):
    a, b = g
    a2, b2 = h
    return (field._mul(a, a2), field._add(field._mul(a, b2), b))


def aff_inv(field: Field, g):
    a, b = g
    ia = field._inv(a)
    return (ia, field._neg(field._mul(ia, b)))


def aff_act(field: Field, g, x: int) -> int:
    a, b = g
    return field._add(field._mul(a, x), b)


def enumerate_aff(field: Field):
    """All q(q-1) group elements in ascending (a, b) code order."""
    return [(a, b) for a in range(1, field.q) for b in range(field.q)]


@dataclass(frozen=True)
class AffSet:
    """A finite subset of the affine group, with set semantics."""

    field: Field
    elems: frozenset

    def __init__(self, field: Field, elems):
        out = {check_element(field, g) for g in elems}
        object.__setattr__(self, "field", field)
        object.__setattr__(self, "elems", frozenset(out))

    def __len__(self):
        return len(self.elems)

    def __iter__(self):
        return iter(self.elems)

    def __contains__(self, g):
        return g in self.elems

    def sorted_elems(self):
        return sorted(self.elems)

    def is_symmetric(self) -> bool:
        field = self.field
        return all(aff_inv(field, g) in self.elems for g in self.elems)


def product_power(A: AffSet, k: int) -> AffSet:
    """All products of exactly k elements of A, deduplicated per round."""
    if len(A) == 0:
        raise EmptySet("no elements")
    if not isinstance(k, int) or k < 1:
        raise BadExponent(f"power must be a positive integer, got {k!r}")
    field = A.field
    base = A.elems
    current = base
    for _ in range(k - 1):
        nxt = {aff_mul(field, g, h) for g in current for h in base}
        if nxt == current:
            # A^(i+1) = A^i implies all later powers coincide
            break
        current = nxt
    out = object.__new__(AffSet)
    object.__setattr__(out, "field", field)
    object.__setattr__(out, "elems", frozenset(current))
    return out


def tripling_constant(A: AffSet) -> Fraction:
    """|A^3| / |A| as an exact rational; requires A = A^{-1}."""
    if len(A) == 0:
        raise EmptySet("no elements")
    if not A.is_symmetric():
        raise NotSymmetric("tripling constant needs A = A^(-1)")
    return Fraction(len(product_power(A, 3)), len(A))


def projection_pi(A: AffSet) -> set[int]:
    """Scale coordinates present in A (the vertical lines A meets)."""
    return {a for a, _ in A.elems}


def stabilizer(field: Field, x: int) -> AffSet:
    """All q-1 elements fixing x: {(a, (1-a)x)}."""
    field.check(x)
    elems = [(a, field._mul(field._sub(1, a), x)) for a in range(1, field.q)]
    return AffSet(field, elems)


def unipotent(field: Field) -> AffSet:
    """The subgroup {(1, b)}, a vertical line of size q."""
    return AffSet(field, [(1, b) for b in range(field.q)])


def fiber_slope(field: Field, g) -> Slope:
    """Slope b/(a-1) of the conjugation fibers of g; INF when a = 1."""
    a, b = check_element(field, g)
    if g == IDENTITY:
        raise IdentityElement("conjugation fibers of the identity are not lines")
    if a == 1:
        return INF
    return field._mul(b, field._inv(field._sub(a, 1)))


def conjugation_image(A: AffSet, g) -> AffSet:
    """{h g h^{-1} : h in A}; all images share the scale of g."""
    field = A.field
    check_element(field, g)
    if g == IDENTITY:
        raise IdentityElement("conjugating by every h fixes the identity")
    out = {aff_mul(field, aff_mul(field, h, g), aff_inv(field, h)) for h in A.elems}
    result = object.__new__(AffSet)
    object.__setattr__(result, "field", field)
    object.__setattr__(result, "elems", frozenset(out))
    return result


@dataclass
class PiBoundResult:
    lhs: int
    rhs: Fraction
    holds: bool


def pi_bound_check(A: AffSet, g, k: int) -> PiBoundResult:
    """|pi(A)| <= |A^(k+3)| / |phi_g(A)| for symmetric A and g in A^k.

    The inequality is a proved statement; a False result is surfaced by the
    harness as a counterexample record.
    """
    field = A.field
    check_element(field, g)
    if g == IDENTITY:
        raise IdentityElement("the bound requires g != identity")
    if not A.is_symmetric():
        raise NotSymmetric("the bound requires A = A^(-1)")
    if not isinstance(k, int) or k < 1:
        raise BadExponent(f"k must be a positive integer, got {k!r}")
    if g not in product_power(A, k).elems:
        raise MembershipViolation(f"{g!r} is not in A^{k}")
    lhs = len(projection_pi(A))
    rhs = Fraction(len(product_power(A, k + 3)), len(conjugation_image(A, g)))
    return PiBoundResult(lhs=lhs, rhs=rhs, holds=lhs <= rhs)


def large_regime_threshold(q: int) -> int:
    """Smallest integer size in the large regime, i.e. ceil((3+2*sqrt(2))*q).

    (3+2*sqrt(2))*q = 3q + sqrt(8*q^2) is never an integer, so the ceiling
    is 3q + isqrt(8*q^2) + 1.
    """
    return 3 * q + isqrt(8 * q * q) + 1


def _silver_bound_holds(pi_size: int, C: Fraction) -> bool:
    # pi < (4 + 2*sqrt(2)) * C^4, compared in exact integers:
    # L = pi*den^4 - 4*num^4 < 2*sqrt(2)*num^4  <=>  L < 0 or L^2 < 8*num^8
    num, den = C.numerator, C.denominator
    lhs = pi_size * den ** 4 - 4 * num ** 4
    if lhs < 0:
        return True
    return lhs * lhs < 8 * num ** 8


@dataclass
class CaseB:
    pi_size: int
    bound_text: str
    holds: bool


@dataclass
class CaseC:
    pi_size: int
    bound: Fraction
    holds: bool
    u_covered: bool


@dataclass
class ClassificationReport:
    """Outcome of the three-way structure test for a slowly growing set."""

    size_regime: str  # "small" | "medium" | "large"
    tripling: Fraction
    case_a: Optional[int]  # witness x with A inside Stab(x)
    case_b: Optional[CaseB]
    case_c: Optional[CaseC]
    disjunction_holds: bool


def classify(A: AffSet) -> ClassificationReport:
    """Test the structure alternatives for a symmetric set.

    Case (a): A fixes some point x (scan over all q candidates).
    Case (b): |pi(A)| < (p^floor(e/2) + 2) C^4 in the small regime
    (|A| <= q), or |pi(A)| < (4 + 2*sqrt(2)) C^4 in the medium regime.
    Case (c): in the large regime, |pi(A)| < (2/q) C^3 |A| and the eighth
    power covers the unipotent subgroup.

    At least one applicable case must verify; a report with
    disjunction_holds False is a theorem violation for the harness.
    """
    field = A.field
    if not A.is_symmetric():
        raise NotSymmetric("classification requires A = A^(-1)")
    if len(A) <= 1:
        raise TooSmall(f"need |A| > 1, got {len(A)}")
    q = field.q
    C = tripling_constant(A)
    size = len(A)
    if size <= q:
        regime = "small"
    elif size >= large_regime_threshold(q):
        regime = "large"
    else:
        regime = "medium"

    case_a = None
    for x in field.elements():
        if all(aff_act(field, g, x) == x for g in A.elems):
            case_a = x
            break

    pi_size = len(projection_pi(A))
    case_b = None
    case_c = None
    if regime == "small":
        bound = Fraction(field.p ** (field.e // 2) + 2) * C ** 4
        case_b = CaseB(pi_size=pi_size, bound_text=str(bound),
                       holds=pi_size < bound)
    elif regime == "medium":
        text = f"(4+2sqrt2)*({C})^4"
        case_b = CaseB(pi_size=pi_size, bound_text=text,
                       holds=_silver_bound_holds(pi_size, C))
    else:
        bound = Fraction(2, q) * C ** 3 * size
        eighth = product_power(A, 8)
        covered = unipotent(field).elems <= eighth.elems
        case_c = CaseC(pi_size=pi_size, bound=bound,
                       holds=pi_size < bound, u_covered=covered)

    ok = case_a is not None
    if case_b is not None and case_b.holds:
        ok = True
    if case_c is not None and case_c.holds and case_c.u_covered:
        ok = True
    return ClassificationReport(size_regime=regime, tripling=C,
                                case_a=case_a, case_b=case_b, case_c=case_c,
                                disjunction_holds=ok)
