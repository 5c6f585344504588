"""Self-contained checkers for the three imported inequalities the pipeline
leans on: the point-line incidence bound, Kneser's sumset theorem in the
additive group of GF(q), and the product-set power inequality.

The incidence deviation is compared squared, (q*I - |P||L|)^2 <= q^3 |P||L|,
so everything stays in exact integers.  Kneser is implemented only for
(GF(q), +), the one group the pipeline applies it to.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from typing import NamedTuple

from .errors import BadExponent, EmptySet, NotSymmetric
from .ff import Field
from .plane import INF, PlanePointSet, Slope
from .affgroup import AffSet, tripling_constant, product_power


class AffineLine(NamedTuple):
    """y = slope*x + c for a finite slope; x = c when slope is INF."""

    slope: Slope
    c: int

    def contains(self, field: Field, pt) -> bool:
        a, b = pt
        if self.slope == INF:
            return a == self.c
        return b == field._add(field._mul(self.slope, a), self.c)

    def points(self, field: Field):
        if self.slope == INF:
            return [(self.c, b) for b in field.elements()]
        return [(a, field._add(field._mul(self.slope, a), self.c))
                for a in field.elements()]

    def to_text(self) -> str:
        return f"v {self.c}" if self.slope == INF else f"s {self.slope} {self.c}"


def enumerate_lines(field: Field) -> list[AffineLine]:
    """All q^2 + q affine lines: non-vertical by (slope, intercept), then
    vertical by intercept."""
    out = [AffineLine(s, c) for s in field.elements() for c in field.elements()]
    out.extend(AffineLine(INF, c) for c in field.elements())
    return out


@dataclass
class IncidenceResult:
    count: int
    expectation: Fraction
    deviation_sq: int  # (q*count - |P||L|)^2, for the squared comparison


def incidence_count(field: Field, P, L) -> IncidenceResult:
    """Exact number of incident (point, line) pairs.

    Lines are grouped by slope so each slope costs one pass over P.
    """
    P = set(P)
    by_slope = {}
    for line in L:
        by_slope.setdefault(line.slope, []).append(line.c)
    total = 0
    sub, mul = field._sub, field._mul
    for slope, cs in by_slope.items():
        if slope == INF:
            counter = Counter(a for a, _ in P)
        else:
            counter = Counter(sub(b, mul(slope, a)) for a, b in P)
        for c in cs:
            total += counter.get(c, 0)
    size_l = sum(len(cs) for cs in by_slope.values())
    dev = field.q * total - len(P) * size_l
    return IncidenceResult(count=total,
                           expectation=Fraction(len(P) * size_l, field.q),
                           deviation_sq=dev * dev)


def vinh_check(field: Field, P, L):
    """(holds, result) for the squared incidence inequality
    (q*I - |P||L|)^2 <= q^3 |P||L|; a False is a counterexample record."""
    P = set(P)
    L = list(L)
    result = incidence_count(field, P, L)
    rhs = field.q ** 3 * len(P) * len(L)
    return result.deviation_sq <= rhs, result


def undetermined_lines(A: PlanePointSet) -> set[AffineLine]:
    """Lines meeting A in at most one point."""
    field = A.field
    sub, mul = field._sub, field._mul
    determined = set()
    for s in field.elements():
        counter = Counter(sub(b, mul(s, a)) for a, b in A.points)
        determined.update(AffineLine(s, c) for c, k in counter.items() if k >= 2)
    counter = Counter(a for a, _ in A.points)
    determined.update(AffineLine(INF, c) for c, k in counter.items() if k >= 2)
    return {line for line in enumerate_lines(field) if line not in determined}


def sumset(field: Field, A, B) -> set[int]:
    add = field._add
    return {add(a, b) for a in A for b in B}


def stabilizer_subgroup(field: Field, S) -> set[int]:
    """{h : S + h = S}; an additive subgroup containing 0."""
    S = set(S)
    add = field._add
    out = set()
    for h in field.elements():
        if all(add(s, h) in S for s in S):
            out.add(h)
    return out


def kneser_check(field: Field, A, B):
    """(holds, H_size) for |A+B| >= min(q, |A| + |B| - |H|), H the stabilizer
    of the sumset."""
    A, B = set(A), set(B)
    if not A or not B:
        raise EmptySet("Kneser needs nonempty sets")
    total = sumset(field, A, B)
    H = stabilizer_subgroup(field, total)
    holds = len(total) >= min(field.q, len(A) + len(B) - len(H))
    return holds, len(H)


def ruzsa_check(A: AffSet, k: int):
    """(holds, C) for |A^k| <= C^(k-2) |A| with C the tripling constant."""
    if not isinstance(k, int) or k < 4:
        raise BadExponent(f"the power inequality needs k >= 4, got {k!r}")
    if not A.is_symmetric():
        raise NotSymmetric("the power inequality needs A = A^(-1)")
    C = tripling_constant(A)
    holds = len(product_power(A, k)) <= C ** (k - 2) * len(A)
    return holds, C
