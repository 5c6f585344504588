"""Dense univariate polynomial algebra over GF(p^e).

Coefficients are stored constant term first with no trailing zeros; the zero
polynomial has an empty coefficient tuple and degree NEG_INF.  Text form is
space-separated coefficient codes, constant first ("0 2 1" is x^2 + 2x).

Root extraction scans all q field elements and peels multiplicities by exact
division; this is deliberate (target fields are small) and avoids a general
factorization stack.
"""

from __future__ import annotations

from .errors import (
    CodeOutOfRange,
    DivisionByZeroPoly,
    NonMonic,
    SpecMismatch,
    ZeroPolynomial,
)
from .ff import Field

NEG_INF = float("-inf")


class Polynomial:
    """Immutable dense polynomial over a fixed field."""

    __slots__ = ("field", "coeffs")

    def __init__(self, field: Field, coeffs):
        coeffs = list(coeffs)
        while coeffs and coeffs[-1] == 0:
            coeffs.pop()
        for c in coeffs:
            field.check(c)
        self.field = field
        self.coeffs = tuple(coeffs)

    @classmethod
    def _raw(cls, field, coeffs):
        # internal: coeffs already normalized and validated
        self = object.__new__(cls)
        self.field = field
        self.coeffs = tuple(coeffs)
        return self

    @classmethod
    def zero(cls, field):
        return cls._raw(field, ())

    @classmethod
    def one(cls, field):
        return cls._raw(field, (1,))

    @classmethod
    def constant(cls, field, c):
        field.check(c)
        return cls._raw(field, (c,) if c else ())

    @classmethod
    def x(cls, field):
        return cls._raw(field, (0, 1))

    @classmethod
    def x_power(cls, field, n):
        """The monomial x^n."""
        return cls._raw(field, (0,) * n + (1,))

    @classmethod
    def from_text(cls, field, text: str):
        try:
            codes = [int(tok) for tok in text.split()]
        except ValueError as exc:
            raise CodeOutOfRange(f"bad coefficient token in {text!r}") from exc
        return cls(field, codes)

    def to_text(self) -> str:
        if not self.coeffs:
            return "0"
        return " ".join(str(c) for c in self.coeffs)

    # -- structure

    @property
    def degree(self):
        return len(self.coeffs) - 1 if self.coeffs else NEG_INF

    def is_zero(self) -> bool:
        return not self.coeffs

    def is_monic(self) -> bool:
        return bool(self.coeffs) and self.coeffs[-1] == 1

    def leading(self) -> int:
        if not self.coeffs:
            raise ZeroPolynomial("zero polynomial has no leading coefficient")
        return self.coeffs[-1]

    def __eq__(self, other):
        if not isinstance(other, Polynomial):
            return NotImplemented
        return self.field == other.field and self.coeffs == other.coeffs

    def __hash__(self):
        return hash((self.field, self.coeffs))

    def __repr__(self):
        if not self.coeffs:
            return "0"
        terms = []
        for i in range(len(self.coeffs) - 1, -1, -1):
            c = self.coeffs[i]
            if c == 0:
                continue
            if i == 0:
                terms.append(str(c))
            else:
                x = "x" if i == 1 else f"x^{i}"
                terms.append(x if c == 1 else f"{c}{x}")
        return " + ".join(terms)

    def _same_field(self, other):
        if self.field != other.field:
            raise SpecMismatch(f"operands over {self.field} and {other.field}")

    # -- ring operations

    def __add__(self, other):
        if not isinstance(other, Polynomial):
            return NotImplemented
        self._same_field(other)
        f = self.field
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        add = f._add
        for i, c in enumerate(b):
            out[i] = add(out[i], c)
        while out and out[-1] == 0:
            out.pop()
        return Polynomial._raw(f, out)

    def __neg__(self):
        neg = self.field._neg
        return Polynomial._raw(self.field, tuple(neg(c) for c in self.coeffs))

    def __sub__(self, other):
        if not isinstance(other, Polynomial):
            return NotImplemented
        return self + (-other)

    def __mul__(self, other):
        if not isinstance(other, Polynomial):
            return NotImplemented
        self._same_field(other)
        f = self.field
        a, b = self.coeffs, other.coeffs
        if not a or not b:
            return Polynomial._raw(f, ())
        out = [0] * (len(a) + len(b) - 1)
        mul, add = f._mul, f._add
        for i, ai in enumerate(a):
            if ai:
                for j, bj in enumerate(b):
                    if bj:
                        out[i + j] = add(out[i + j], mul(ai, bj))
        return Polynomial._raw(f, out)

    def scale(self, c: int):
        """Multiply every coefficient by the field element c."""
        self.field.check(c)
        if c == 0:
            return Polynomial._raw(self.field, ())
        mul = self.field._mul
        return Polynomial._raw(self.field, tuple(mul(c, a) for a in self.coeffs))

    def __pow__(self, n):
        if not isinstance(n, int) or n < 0:
            return NotImplemented
        result = Polynomial.one(self.field)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def derivative(self):
        """Formal derivative; exponent factors reduce mod the characteristic."""
        f = self.field
        p = f.p
        mul = f._mul
        out = [0] * max(len(self.coeffs) - 1, 0)
        for i in range(1, len(self.coeffs)):
            k = i % p
            if k:
                # k < p, so k is also the code of the prime-subfield element k
                out[i - 1] = mul(self.coeffs[i], k)
        while out and out[-1] == 0:
            out.pop()
        return Polynomial._raw(f, out)

    def __divmod__(self, other):
        if not isinstance(other, Polynomial):
            return NotImplemented
        self._same_field(other)
        if not other.coeffs:
            raise DivisionByZeroPoly("division by the zero polynomial")
        f = self.field
        rem = list(self.coeffs)
        dd = len(other.coeffs) - 1
        if len(rem) - 1 < dd:
            return Polynomial._raw(f, ()), Polynomial._raw(f, rem)
        mul, sub = f._mul, f._sub
        inv_lead = f._inv(other.coeffs[-1])
        den = other.coeffs
        quot = [0] * (len(rem) - dd)
        for i in range(len(rem) - 1 - dd, -1, -1):
            factor = mul(rem[i + dd], inv_lead)
            quot[i] = factor
            if factor:
                for j in range(dd + 1):
                    rem[i + j] = sub(rem[i + j], mul(factor, den[j]))
        del rem[dd:]
        while rem and rem[-1] == 0:
            rem.pop()
        return Polynomial._raw(f, quot), Polynomial._raw(f, rem)

    def __floordiv__(self, other):
        return divmod(self, other)[0]

    def __mod__(self, other):
        return divmod(self, other)[1]

    def __call__(self, x: int) -> int:
        """Evaluate at the field element x (Horner)."""
        f = self.field
        f.check(x)
        mul, add = f._mul, f._add
        acc = 0
        for c in reversed(self.coeffs):
            acc = add(mul(acc, x), c)
        return acc

    # -- root structure

    def roots_with_multiplicity(self) -> dict[int, int]:
        """Map root -> multiplicity over the base field.

        Roots are peeled off by repeated exact division, so the work shrinks
        with each root found.
        """
        if not self.coeffs:
            raise ZeroPolynomial("the zero polynomial vanishes everywhere")
        residual, out = list(self.coeffs), {}
        f = self.field
        mul, add = f._mul, f._add
        for r in f.elements():
            if len(residual) == 1:
                break
            while True:
                # Horner evaluation and synthetic division in one pass
                acc = 0
                for c in reversed(residual):
                    acc = add(mul(acc, r), c)
                if acc != 0:
                    break
                quot = [0] * (len(residual) - 1)
                carry = 0
                for i in range(len(residual) - 1, 0, -1):
                    carry = add(mul(carry, r), residual[i])
                    quot[i - 1] = carry
                residual = quot
                out[r] = out.get(r, 0) + 1
                if len(residual) == 1:
                    break
        return out

    def linear_split(self):
        """Split into the product of linear factors and the rootless rest.

        Returns (fully_reducible, nonlinear, l1) with
        fully_reducible * nonlinear == self exactly; l1 is the p-adic
        valuation of the gcd of the root multiplicities, or None when the
        polynomial has no roots at all.
        """
        if not self.coeffs:
            raise ZeroPolynomial("cannot split the zero polynomial")
        if self.coeffs[-1] != 1:
            raise NonMonic("linear split requires a monic polynomial")
        mults = self.roots_with_multiplicity()
        if not mults:
            return Polynomial.one(self.field), self, None
        f = self.field
        mul, add = f._mul, f._add
        reducible = [1]
        for r, m in mults.items():
            neg_r = f._neg(r)
            for _ in range(m):
                # multiply by (x - r): shift up plus (-r) times each coefficient
                nxt = [0] + reducible
                for i, c in enumerate(reducible):
                    if c:
                        nxt[i] = add(nxt[i], mul(neg_r, c))
                reducible = nxt
        fully = Polynomial._raw(f, reducible)
        nonlinear, rem = divmod(self, fully)
        assert rem.is_zero()
        g = 0
        for m in mults.values():
            g = _gcd(g, m)
        l1 = 0
        p = f.p
        while g % p == 0:
            g //= p
            l1 += 1
        return fully, nonlinear, l1

    def pth_content(self):
        """Largest l with all exponents divisible by p^l, plus the p^l-th root.

        Returns (l, reduced) with reduced**(p**l) == self; reduced is obtained
        by dividing exponents by p^l and taking p^l-th roots of coefficients
        through the inverse Frobenius.  A constant polynomial reports l = 0.
        """
        if not self.coeffs:
            raise ZeroPolynomial("p-th content of the zero polynomial")
        f = self.field
        p = f.p
        if len(self.coeffs) == 1:
            return 0, self
        g = 0
        for i, c in enumerate(self.coeffs):
            if c and i:
                g = _gcd(g, i)
        l = 0
        while g and g % p == 0:
            g //= p
            l += 1
        if l == 0:
            return 0, self
        step = p ** l
        l_eff = l % f.e
        back = f.e - l_eff if l_eff else 0
        out = [0] * ((len(self.coeffs) - 1) // step + 1)
        for i in range(0, len(self.coeffs), step):
            c = self.coeffs[i]
            if c:
                out[i // step] = f.frobenius(c, back) if back else c
        return l, Polynomial._raw(f, out)


def _gcd(a, b):
    while b:
        a, b = b, a % b
    return a


def elementary_symmetric(field: Field, values) -> tuple[int, ...]:
    """(sigma_0, ..., sigma_n) of the given field elements, sigma_0 = 1.

    The product of (x - v_i) expands as sum_j (-1)^j sigma_j x^(n-j).
    """
    sig = [1]
    add, mul = field._add, field._mul
    for v in values:
        field.check(v)
        sig.append(0)
        for j in range(len(sig) - 1, 0, -1):
            sig[j] = add(sig[j], mul(v, sig[j - 1]))
    return tuple(sig)
