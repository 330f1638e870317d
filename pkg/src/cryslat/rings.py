"""Exact base rings for the lattice pipeline.

Four element families live here, next to plain Python ``int``:

* ``PrimeField(p)`` elements, integers mod a prime p.
* ``ExtField(p, degree=m)`` elements, the field F_{p^m} represented as
  polynomials in a generator modulo a monic irreducible of degree m.
* ``LocalRational``, exact rationals whose denominator is coprime to p,
  i.e. the subring Z_(p) of Q in lowest terms.
* ``CappedResidue``, integers mod p^N that remember the cap N, used for
  finite-precision Frobenius entries.

All arithmetic is exact; nothing here touches floating point. Elements
are immutable, and binary operations require matching parents (same p,
same modulus; caps combine as min(N1, N2)). Plain integers coerce into
any of the rings on mixed arithmetic.

Univariate polynomials over F_p appear as tuples of small ints
``(c_0, c_1, ..., c_k)`` with c_k != 0 (the zero polynomial is the
empty tuple). They back irreducibility search, extension-field
reduction, and the distinct-degree factor-degree routine used by the
zeta oracle.
"""

from __future__ import annotations

import math
from fractions import Fraction
from functools import lru_cache
from typing import NamedTuple, Sequence

INFINITY = float("inf")


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n < 4:
        return True
    if n % 2 == 0:
        return False
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


class CappedValuation(NamedTuple):
    """p-adic valuation known only up to a cap.

    ``at_least`` is True when the residue is 0 mod p^N, so the true
    valuation is merely bounded below by ``bound``.
    """

    bound: int
    at_least: bool


def valuation(x, p: int | None = None):
    """p-adic valuation of x.

    Returns a nonnegative int, or INFINITY for x = 0. CappedResidue
    inputs return a CappedValuation instead, with the at_least flag set
    when the residue vanishes mod p^N. Fraction and LocalRational
    inputs must have denominator coprime to p.
    """
    if isinstance(x, CappedResidue):
        return x.valuation()
    if isinstance(x, LocalRational):
        if p is not None and p != x.p:
            raise ValueError("valuation prime %d disagrees with element prime %d" % (p, x.p))
        return _int_valuation(x.num, x.p)
    if p is None:
        raise ValueError("valuation of %r needs an explicit prime" % (x,))
    if not is_prime(p):
        raise ValueError("%d is not prime" % p)
    if isinstance(x, Fraction):
        if x.denominator % p == 0:
            raise ValueError("%s is not p-local at p=%d (denominator divisible by p)" % (x, p))
        return _int_valuation(x.numerator, p)
    if isinstance(x, int):
        return _int_valuation(x, p)
    raise TypeError("valuation does not handle %r" % type(x))


def _int_valuation(n: int, p: int):
    if n == 0:
        return INFINITY
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


# ---------------------------------------------------------------------------
# prime fields


@lru_cache(maxsize=None)
def PrimeField(p: int) -> "_PrimeField":
    return _PrimeField(p)


class _PrimeField:
    """The field F_p. Calling the field coerces an int into it."""

    __slots__ = ("p",)

    def __init__(self, p: int):
        if not is_prime(p):
            raise ValueError("%d is not prime" % p)
        self.p = p

    def __call__(self, value) -> "PrimeFieldElement":
        if isinstance(value, PrimeFieldElement):
            if value.field is not self:
                raise ValueError("element of F_%d is not in F_%d" % (value.field.p, self.p))
            return value
        return PrimeFieldElement(self, value % self.p)

    @property
    def zero(self):
        return PrimeFieldElement(self, 0)

    @property
    def one(self):
        return PrimeFieldElement(self, 1)

    def elements(self):
        return (PrimeFieldElement(self, v) for v in range(self.p))

    def __repr__(self):
        return "PrimeField(%d)" % self.p


class PrimeFieldElement:
    __slots__ = ("field", "value")

    def __init__(self, field: _PrimeField, value: int):
        self.field = field
        self.value = value

    def _coerce(self, other):
        if isinstance(other, PrimeFieldElement):
            if other.field is not self.field:
                raise ValueError("mixed prime fields")
            return other
        if isinstance(other, int):
            return self.field(other)
        return None

    def __add__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return PrimeFieldElement(self.field, (self.value + other.value) % self.field.p)

    __radd__ = __add__

    def __neg__(self):
        return PrimeFieldElement(self.field, -self.value % self.field.p)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return PrimeFieldElement(self.field, (self.value - other.value) % self.field.p)

    def __rsub__(self, other):
        return -(self - other)

    def __mul__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return PrimeFieldElement(self.field, (self.value * other.value) % self.field.p)

    __rmul__ = __mul__

    def __pow__(self, e: int):
        if e < 0:
            return self.inverse() ** (-e)
        return PrimeFieldElement(self.field, pow(self.value, e, self.field.p))

    def inverse(self):
        if self.value == 0:
            raise ZeroDivisionError("inverse of 0 in F_%d" % self.field.p)
        return PrimeFieldElement(self.field, pow(self.value, -1, self.field.p))

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self * other.inverse()

    def __rtruediv__(self, other):
        return self.inverse() * other

    def __eq__(self, other):
        if isinstance(other, int):
            return self.value == other % self.field.p
        return (
            isinstance(other, PrimeFieldElement)
            and other.field is self.field
            and other.value == self.value
        )

    def __hash__(self):
        return hash((self.field.p, self.value))

    def __bool__(self):
        return self.value != 0

    def __int__(self):
        return self.value

    def __repr__(self):
        return "F%d(%d)" % (self.field.p, self.value)


# ---------------------------------------------------------------------------
# univariate polynomials over F_p as coefficient tuples (c_0, ..., c_k)


def uni_trim(coeffs: Sequence[int], p: int) -> tuple:
    cs = [c % p for c in coeffs]
    while cs and cs[-1] == 0:
        cs.pop()
    return tuple(cs)


def uni_add(f, g, p):
    n = max(len(f), len(g))
    return uni_trim([(f[i] if i < len(f) else 0) + (g[i] if i < len(g) else 0) for i in range(n)], p)


def uni_scale(f, c, p):
    return uni_trim([c * a for a in f], p)


def uni_mul(f, g, p):
    if not f or not g:
        return ()
    out = [0] * (len(f) + len(g) - 1)
    for i, a in enumerate(f):
        if a:
            for j, b in enumerate(g):
                out[i + j] += a * b
    return uni_trim(out, p)


def uni_divmod(f, g, p):
    if not g:
        raise ZeroDivisionError("polynomial division by zero")
    f = list(uni_trim(f, p))
    g = uni_trim(g, p)
    inv_lead = pow(g[-1], -1, p)
    q = [0] * max(0, len(f) - len(g) + 1)
    while len(f) >= len(g):
        c = f[-1] * inv_lead % p
        k = len(f) - len(g)
        q[k] = c
        for i, b in enumerate(g):
            f[k + i] = (f[k + i] - c * b) % p
        while f and f[-1] % p == 0:
            f.pop()
    return tuple(q), uni_trim(f, p)


def uni_mod(f, g, p):
    return uni_divmod(f, g, p)[1]


def uni_gcd(f, g, p):
    f, g = uni_trim(f, p), uni_trim(g, p)
    while g:
        f, g = g, uni_mod(f, g, p)
    if f:
        f = uni_scale(f, pow(f[-1], -1, p), p)  # monic normalization
    return f

def uni_deriv(f, p):
    return uni_trim([i * f[i] for i in range(1, len(f))], p)


def uni_powmod(f, e: int, g, p):
    result = uni_mod((1,), g, p)
    base = uni_mod(f, g, p)
    while e:
        if e & 1:
            result = uni_mod(uni_mul(result, base, p), g, p)
        base = uni_mod(uni_mul(base, base, p), g, p)
        e >>= 1
    return result


def uni_is_irreducible(f, p) -> bool:
    """Rabin-style test: f of degree m >= 1 is irreducible over F_p iff
    gcd(f, x^{p^i} - x) = 1 for 1 <= i <= m // 2 (a reducible f always
    has an irreducible factor of degree at most m // 2, and that factor
    divides x^{p^i} - x for i equal to its degree)."""
    f = uni_trim(f, p)
    m = len(f) - 1
    if m < 1:
        return False
    xq = (0, 1)
    for _ in range(m // 2):
        xq = uni_powmod(xq, p, f, p)  # one more Frobenius: x^{p^i} mod f
        if len(uni_gcd(uni_add(xq, uni_scale((0, 1), -1, p), p), f, p)) != 1:
            return False
    return True


def find_irreducible(p: int, m: int) -> tuple:
    """First monic irreducible of degree m over F_p in enumeration order.

    Candidates x^m + c_{m-1} x^{m-1} + ... + c_0 are enumerated by
    counting t = 0, 1, 2, ... and reading the base-p digits of t as
    (c_0, c_1, ...), least significant digit first. Deterministic.
    """
    if not is_prime(p):
        raise ValueError("%d is not prime" % p)
    if m < 1:
        raise ValueError("degree must be positive")
    for t in range(p**m):
        digits = []
        v = t
        for _ in range(m):
            digits.append(v % p)
            v //= p
        f = tuple(digits) + (1,)
        if m == 1 or uni_is_irreducible(f, p):
            return f
    raise AssertionError("no irreducible of degree %d over F_%d" % (m, p))


# ---------------------------------------------------------------------------
# extension fields


@lru_cache(maxsize=None)
def ExtField(p: int, degree: int | None = None, modulus: tuple | None = None) -> "_ExtField":
    return _ExtField(p, degree, modulus)


class _ExtField:
    """F_{p^m} as F_p[x] mod a monic irreducible of degree m."""

    __slots__ = ("p", "degree", "modulus")

    def __init__(self, p, degree=None, modulus=None):
        if not is_prime(p):
            raise ValueError("%d is not prime" % p)
        if modulus is None:
            if degree is None:
                raise ValueError("need a degree or an explicit modulus")
            modulus = find_irreducible(p, degree)
        modulus = uni_trim(modulus, p)
        if len(modulus) < 2 or modulus[-1] != 1:
            raise ValueError("modulus must be monic of positive degree")
        if not uni_is_irreducible(modulus, p):
            raise ValueError("modulus is reducible over F_%d" % p)
        if degree is not None and degree != len(modulus) - 1:
            raise ValueError("degree disagrees with modulus")
        self.p = p
        self.degree = len(modulus) - 1
        self.modulus = modulus

    @property
    def order(self):
        return self.p**self.degree

    def __call__(self, value) -> "ExtFieldElement":
        if isinstance(value, ExtFieldElement):
            if value.field is not self:
                raise ValueError("element belongs to a different extension")
            return value
        if isinstance(value, PrimeFieldElement):
            value = value.value
        if isinstance(value, int):
            coeffs = (value % self.p,) if value % self.p else ()
            return ExtFieldElement(self, coeffs)
        return ExtFieldElement(self, uni_mod(tuple(value), self.modulus, self.p))

    @property
    def zero(self):
        return ExtFieldElement(self, ())

    @property
    def one(self):
        return ExtFieldElement(self, (1,))

    @property
    def generator(self):
        return ExtFieldElement(self, uni_mod((0, 1), self.modulus, self.p))

    def elements(self):
        """All p^m elements, counting coefficient vectors base p with the
        constant coefficient as the fastest digit."""
        for t in range(self.order):
            digits = []
            v = t
            for _ in range(self.degree):
                digits.append(v % self.p)
                v //= self.p
            yield ExtFieldElement(self, uni_trim(digits, self.p))

    def __repr__(self):
        return "ExtField(%d, degree=%d)" % (self.p, self.degree)


class ExtFieldElement:
    __slots__ = ("field", "coeffs")

    def __init__(self, field: _ExtField, coeffs: tuple):
        self.field = field
        self.coeffs = coeffs

    def _coerce(self, other):
        if isinstance(other, ExtFieldElement):
            if other.field is not self.field:
                raise ValueError("mixed extension fields")
            return other
        if isinstance(other, (int, PrimeFieldElement)):
            return self.field(other)
        return None

    def __add__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return ExtFieldElement(self.field, uni_add(self.coeffs, other.coeffs, self.field.p))

    __radd__ = __add__

    def __neg__(self):
        return ExtFieldElement(self.field, uni_scale(self.coeffs, -1, self.field.p))

    def __sub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return -(self - other)

    def __mul__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        prod = uni_mul(self.coeffs, other.coeffs, self.field.p)
        return ExtFieldElement(self.field, uni_mod(prod, self.field.modulus, self.field.p))

    __rmul__ = __mul__

    def __pow__(self, e: int):
        if e < 0:
            return self.inverse() ** (-e)
        return ExtFieldElement(
            self.field, uni_powmod(self.coeffs, e, self.field.modulus, self.field.p)
        )

    def inverse(self):
        if not self.coeffs:
            raise ZeroDivisionError("inverse of 0 in F_%d^%d" % (self.field.p, self.field.degree))
        # extended euclid against the modulus
        p, mod = self.field.p, self.field.modulus
        r0, r1 = mod, self.coeffs
        s0, s1 = (), (1,)
        while r1:
            q, r = uni_divmod(r0, r1, p)
            r0, r1 = r1, r
            s0, s1 = s1, uni_add(s0, uni_scale(uni_mul(q, s1, p), -1, p), p)
        assert len(r0) == 1
        inv = uni_scale(s0, pow(r0[0], -1, p), p)
        return ExtFieldElement(self.field, uni_mod(inv, mod, p))

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self * other.inverse()

    def __rtruediv__(self, other):
        return self.inverse() * other

    def frobenius(self):
        return self ** self.field.p

    def __eq__(self, other):
        if isinstance(other, (int, PrimeFieldElement)):
            other = self.field(other)
        return (
            isinstance(other, ExtFieldElement)
            and other.field is self.field
            and other.coeffs == self.coeffs
        )

    def __hash__(self):
        return hash((self.field.p, self.field.modulus, self.coeffs))

    def __bool__(self):
        return bool(self.coeffs)

    def __repr__(self):
        return "Fq(%s)" % (list(self.coeffs),)


# ---------------------------------------------------------------------------
# p-local rationals


class LocalRational:
    """An element of Z_(p): num/den in lowest terms with p not dividing den.

    The denominator is normalized positive. Arithmetic requires both
    operands to be p-local at the same prime; results are re-validated,
    so division by a non-unit raises instead of silently leaving Z_(p).
    """

    __slots__ = ("num", "den", "p")

    def __init__(self, num, den=1, p=None):
        if p is None:
            raise ValueError("LocalRational needs its prime")
        if not is_prime(p):
            raise ValueError("%d is not prime" % p)
        frac = Fraction(num, den)
        if frac.denominator % p == 0:
            raise ValueError(
                "%s/%s is not p-local at p=%d (denominator divisible by p)" % (num, den, p)
            )
        self.num = frac.numerator
        self.den = frac.denominator
        self.p = p

    def as_fraction(self) -> Fraction:
        return Fraction(self.num, self.den)

    def _coerce(self, other):
        if isinstance(other, LocalRational):
            if other.p != self.p:
                raise ValueError("mixed primes %d and %d" % (self.p, other.p))
            return other
        if isinstance(other, (int, Fraction)):
            return LocalRational(other, 1, self.p)
        return None

    def __add__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return LocalRational(self.as_fraction() + other.as_fraction(), 1, self.p)

    __radd__ = __add__

    def __neg__(self):
        return LocalRational(-self.num, self.den, self.p)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return -(self - other)

    def __mul__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return LocalRational(self.as_fraction() * other.as_fraction(), 1, self.p)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        if other.num == 0:
            raise ZeroDivisionError("division by zero in Z_(p)")
        return LocalRational(self.as_fraction() / other.as_fraction(), 1, self.p)

    def __rtruediv__(self, other):
        coerced = self._coerce(other)
        return coerced / self

    def __pow__(self, e: int):
        if e < 0:
            return (LocalRational(1, 1, self.p) / self) ** (-e)
        return LocalRational(self.as_fraction() ** e, 1, self.p)

    def valuation(self):
        return _int_valuation(self.num, self.p)

    def is_unit(self) -> bool:
        return self.num != 0 and self.num % self.p != 0

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.as_fraction() == other
        return (
            isinstance(other, LocalRational)
            and other.p == self.p
            and other.num == self.num
            and other.den == self.den
        )

    def __hash__(self):
        return hash((self.p, self.num, self.den))

    def __bool__(self):
        return self.num != 0

    def __repr__(self):
        if self.den == 1:
            return "LocalRational(%d, p=%d)" % (self.num, self.p)
        return "LocalRational(%d, %d, p=%d)" % (self.num, self.den, self.p)


# ---------------------------------------------------------------------------
# capped residues


class CappedResidue:
    """An integer known mod p^N. The cap N rides along through arithmetic
    and combines as min, matching how p-adic absolute precision behaves
    under ring operations."""

    __slots__ = ("value", "cap", "p")

    def __init__(self, value: int, cap: int, p: int):
        if not is_prime(p):
            raise ValueError("%d is not prime" % p)
        if cap < 1:
            raise ValueError("cap must be at least 1")
        self.value = value % p**cap
        self.cap = cap
        self.p = p

    def _coerce(self, other):
        if isinstance(other, CappedResidue):
            if other.p != self.p:
                raise ValueError("mixed primes %d and %d" % (self.p, other.p))
            return other
        if isinstance(other, int):
            return CappedResidue(other, self.cap, self.p)
        return None

    def __add__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        cap = min(self.cap, other.cap)
        return CappedResidue(self.value + other.value, cap, self.p)

    __radd__ = __add__

    def __neg__(self):
        return CappedResidue(-self.value, self.cap, self.p)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return -(self - other)

    def __mul__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        cap = min(self.cap, other.cap)
        return CappedResidue(self.value * other.value, cap, self.p)

    __rmul__ = __mul__

    def __pow__(self, e: int):
        if e < 0:
            return self.inverse() ** (-e)
        result = CappedResidue(1, self.cap, self.p)
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def inverse(self):
        if self.value % self.p == 0:
            raise ZeroDivisionError("not a unit mod %d^%d" % (self.p, self.cap))
        return CappedResidue(pow(self.value, -1, self.p**self.cap), self.cap, self.p)

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self * other.inverse()

    def valuation(self) -> CappedValuation:
        if self.value == 0:
            return CappedValuation(self.cap, True)
        v = _int_valuation(self.value, self.p)
        return CappedValuation(min(v, self.cap), v >= self.cap)

    def lift(self) -> int:
        """Canonical integer representative in [0, p^N)."""
        return self.value

    def __eq__(self, other):
        if isinstance(other, int):
            return self.value == other % self.p**self.cap
        return (
            isinstance(other, CappedResidue)
            and other.p == self.p
            and other.cap == self.cap
            and other.value == self.value
        )

    def __hash__(self):
        return hash((self.p, self.cap, self.value))

    def __bool__(self):
        return self.value != 0

    def __repr__(self):
        return "CappedResidue(%d, cap=%d, p=%d)" % (self.value, self.cap, self.p)
