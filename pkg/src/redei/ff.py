"""Exact arithmetic in GF(p^e) with a canonical, reproducible construction.

Elements are integer codes in [0, q).  The base-p digits of a code, least
significant first, are the coordinates of the element in the basis
1, t, ..., t^(e-1), where t is the residue class of x modulo the field
modulus.  Code 0 is the additive identity, code 1 the multiplicative one.

The modulus of GF(p^e) is canonical: scanning monic degree-e polynomials
over GF(p) in increasing code order (code = sum of c_i * p^i over the
non-leading coefficients), the first irreducible one wins.  For e = 1 this
yields the polynomial x, so elements are the residues mod p.  No lookup
tables of published polynomials are involved, which keeps element encodings
reproducible across machines.
"""

from __future__ import annotations

import functools
from math import isqrt

from .errors import CodeOutOfRange, NonPrimeCharacteristic, SizeLimit, ZeroInverse

DEFAULT_SIZE_CAP = 1 << 16
# addition tables are q^2 entries; above this q fall back to digit loops
_ADD_TABLE_CAP = 512


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    for d in range(2, isqrt(n) + 1):
        if n % d == 0:
            return False
    return True


def _prime_factors(n: int) -> list[int]:
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


# -- polynomial helpers over GF(p), coefficient lists with constant term
# first.  Used only for modulus construction and the table-free slow paths.

def _fp_trim(c):
    while c and c[-1] == 0:
        c.pop()
    return c


def _fp_rem(num, den, p):
    num = list(num)
    dd = len(den) - 1
    inv_lead = pow(den[-1], p - 2, p)
    for i in range(len(num) - 1 - dd, -1, -1):
        factor = num[i + dd] * inv_lead % p
        if factor:
            for j, dj in enumerate(den):
                num[i + j] = (num[i + j] - factor * dj) % p
    return _fp_trim(num[:dd])


def _fp_is_irreducible(f, p):
    # trial division: a reducible monic f has a monic divisor of degree
    # at most deg(f) // 2
    deg = len(f) - 1
    for d in range(1, deg // 2 + 1):
        for code in range(p ** d):
            den, c = [], code
            for _ in range(d):
                den.append(c % p)
                c //= p
            den.append(1)
            if not _fp_rem(f, den, p):
                return False
    return True


def canonical_modulus(p: int, e: int) -> tuple[int, ...]:
    """Smallest-code monic irreducible polynomial of degree e over GF(p)."""
    for code in range(p ** e):
        coeffs, c = [], code
        for _ in range(e):
            coeffs.append(c % p)
            c //= p
        coeffs.append(1)
        if _fp_is_irreducible(coeffs, p):
            return tuple(coeffs)
    raise AssertionError("no irreducible polynomial found")  # unreachable


class Field:
    """GF(p^e) acting on integer element codes.

    All operations are pure; instances are immutable after construction and
    safe to share across workers.  Use :func:`construct_field` to obtain the
    cached canonical instance for given (p, e).
    """

    __slots__ = ("p", "e", "q", "modulus", "size_cap",
                 "_exp", "_log", "_negt", "_addt")

    def __init__(self, p: int, e: int, size_cap: int = DEFAULT_SIZE_CAP):
        if not isinstance(p, int) or not is_prime(p):
            raise NonPrimeCharacteristic(f"p = {p!r} is not prime")
        if not isinstance(e, int) or e < 1:
            raise ValueError(f"extension degree must be >= 1, got {e!r}")
        q = p ** e
        if q > size_cap:
            raise SizeLimit(f"q = {p}^{e} = {q} exceeds cap {size_cap}")
        self.p = p
        self.e = e
        self.q = q
        self.size_cap = size_cap
        self.modulus = canonical_modulus(p, e)
        self._exp = None
        self._log = None
        self._negt = None
        self._addt = None

    # construct_field returns a cached instance, so unpickling in worker
    # processes reuses one Field (and its tables) per (p, e)
    def __reduce__(self):
        return (construct_field, (self.p, self.e))

    def __repr__(self):
        return f"GF({self.q})"

    def __eq__(self, other):
        if self is other:
            return True
        if not isinstance(other, Field):
            return NotImplemented
        return (self.p, self.e, self.modulus) == (other.p, other.e, other.modulus)

    def __hash__(self):
        return hash((self.p, self.e, self.modulus))

    # -- encoding

    def check(self, a) -> int:
        """Validate an element code, returning it."""
        if not isinstance(a, int) or isinstance(a, bool) or not 0 <= a < self.q:
            raise CodeOutOfRange(f"{a!r} is not a valid element code of {self}")
        return a

    def elements(self) -> range:
        """All q element codes in ascending order."""
        return range(self.q)

    def modulus_code(self) -> int:
        """Integer code of the non-leading modulus coefficients."""
        code = 0
        for c in reversed(self.modulus[:-1]):
            code = code * self.p + c
        return code

    def spec_string(self) -> str:
        """Serialized field description: "p e modulus-code"."""
        return f"{self.p} {self.e} {self.modulus_code()}"

    def modulus_string(self) -> str:
        """Modulus as a compact polynomial in x, e.g. "x^2+1"."""
        terms = []
        for i in range(self.e, -1, -1):
            c = self.modulus[i]
            if c == 0:
                continue
            if i == 0:
                terms.append(str(c))
            else:
                x = "x" if i == 1 else f"x^{i}"
                terms.append(x if c == 1 else f"{c}{x}")
        return "+".join(terms) if terms else "0"

    # -- digit helpers (slow paths and table construction)

    def _digits(self, a):
        p, out = self.p, []
        for _ in range(self.e):
            out.append(a % p)
            a //= p
        return out

    def _add_digits(self, a, b):
        p, s, mult = self.p, 0, 1
        while a or b:
            s += (a % p + b % p) % p * mult
            a //= p
            b //= p
            mult *= p
        return s

    def _neg_digits(self, a):
        p, s, mult = self.p, 0, 1
        while a:
            s += (-a % p) * mult
            a //= p
            mult *= p
        return s

    def _mul_digits(self, a, b):
        # schoolbook product of digit vectors, reduced by the modulus
        p, e, mod = self.p, self.e, self.modulus
        da, db = self._digits(a), self._digits(b)
        prod = [0] * (2 * e - 1)
        for i, ai in enumerate(da):
            if ai:
                for j, bj in enumerate(db):
                    prod[i + j] = (prod[i + j] + ai * bj) % p
        for i in range(2 * e - 2, e - 1, -1):
            c = prod[i]
            if c:
                prod[i] = 0
                for j in range(e):
                    prod[i - e + j] = (prod[i - e + j] - c * mod[j]) % p
        code = 0
        for c in reversed(prod[:e]):
            code = code * p + c
        return code

    # -- table construction

    def _ensure_mul(self):
        if self._exp is not None:
            return
        q = self.q
        if q == 2:
            self._exp, self._log = [1], [None, 0]
            return
        factors = _prime_factors(q - 1)
        gen = None
        for g in range(2, q):
            ok = True
            for r in factors:
                # g^((q-1)/r) by square-and-multiply over digit arithmetic
                n, acc, base = (q - 1) // r, 1, g
                while n:
                    if n & 1:
                        acc = self._mul_digits(acc, base)
                    base = self._mul_digits(base, base)
                    n >>= 1
                if acc == 1:
                    ok = False
                    break
            if ok:
                gen = g
                break
        exp = [1] * (q - 1)
        log = [None] * q
        log[1] = 0
        x = 1
        for i in range(1, q - 1):
            x = self._mul_digits(x, gen)
            exp[i] = x
            log[x] = i
        self._exp, self._log = exp, log

    def _ensure_add(self):
        if self._negt is not None:
            return
        self._negt = [self._neg_digits(a) for a in range(self.q)]
        if self.p != 2 and self.e > 1 and self.q <= _ADD_TABLE_CAP:
            q = self.q
            table = [0] * (q * q)
            for a in range(q):
                row = a * q
                for b in range(q):
                    table[row + b] = self._add_digits(a, b)
            self._addt = table

    # -- arithmetic, validated

    def add(self, a: int, b: int) -> int:
        self.check(a)
        self.check(b)
        return self._add(a, b)

    def sub(self, a: int, b: int) -> int:
        self.check(a)
        self.check(b)
        return self._add(a, self._neg(b))

    def neg(self, a: int) -> int:
        self.check(a)
        return self._neg(a)

    def mul(self, a: int, b: int) -> int:
        self.check(a)
        self.check(b)
        return self._mul(a, b)

    def inv(self, a: int) -> int:
        self.check(a)
        if a == 0:
            raise ZeroInverse(f"0 has no inverse in {self}")
        return self._inv(a)

    def pow(self, a: int, n: int) -> int:
        """a**n for n >= 0, with 0**0 = 1."""
        self.check(a)
        if not isinstance(n, int) or n < 0:
            raise ValueError(f"exponent must be a non-negative integer, got {n!r}")
        return self._pow(a, n)

    def frobenius(self, a: int, l: int) -> int:
        """a**(p**l); the l-fold Frobenius automorphism."""
        self.check(a)
        if not isinstance(l, int) or l < 0:
            raise ValueError(f"Frobenius power must be a non-negative integer, got {l!r}")
        return self._pow(a, self.p ** (l % self.e))

    # -- arithmetic, unchecked (internal hot paths)

    def _add(self, a, b):
        if self.e == 1:
            return (a + b) % self.p
        if self.p == 2:
            return a ^ b
        if self._negt is None:
            self._ensure_add()
        t = self._addt
        if t is not None:
            return t[a * self.q + b]
        return self._add_digits(a, b)

    def _neg(self, a):
        if self.e == 1:
            return -a % self.p
        if self.p == 2:
            return a
        if self._negt is None:
            self._ensure_add()
        return self._negt[a]

    def _sub(self, a, b):
        if self.e == 1:
            return (a - b) % self.p
        if self.p == 2:
            return a ^ b
        return self._add(a, self._neg(b))

    def _mul(self, a, b):
        if a == 0 or b == 0:
            return 0
        if self.e == 1:
            return a * b % self.p
        if self._exp is None:
            self._ensure_mul()
        return self._exp[(self._log[a] + self._log[b]) % (self.q - 1)]

    def _inv(self, a):
        if self.e == 1:
            return pow(a, self.p - 2, self.p)
        if self._exp is None:
            self._ensure_mul()
        return self._exp[-self._log[a] % (self.q - 1)]

    def _pow(self, a, n):
        if a == 0:
            return 1 if n == 0 else 0
        if self.e == 1:
            return pow(a, n, self.p)
        if self._exp is None:
            self._ensure_mul()
        return self._exp[self._log[a] * n % (self.q - 1)]


@functools.lru_cache(maxsize=None)
def construct_field(p: int, e: int, size_cap: int = DEFAULT_SIZE_CAP) -> Field:
    """Canonical GF(p^e); deterministic and cached per (p, e)."""
    return Field(p, e, size_cap)
