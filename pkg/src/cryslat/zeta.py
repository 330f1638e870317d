"""Desk-scale zeta oracle: exact point counts and what they pin down.

Counting is brute force over F_{p^m} and exists to check everything
else: curve numerators recovered through Newton-Girard, zeta functions
assembled from a numerator and the standard projective-space factors,
characteristic polynomials split along the pair's exact sequence, and
Newton-vs-Hodge polygon comparisons. All arithmetic is exact; nothing
here is fast, and nothing here is approximate.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from math import gcd

from .hodge import HodgePolygon
from .rings import (
    uni_deriv,
    uni_divmod,
    uni_gcd,
    uni_powmod,
    uni_trim,
)
from .sparsepoly import SparsePoly
from .variety import FqTables, PairSpec, projective_points


class BudgetError(RuntimeError):
    """Requested enumeration exceeds the configured point budget."""


class CountConsistencyError(ValueError):
    """Point counts incompatible with a smooth-curve zeta function."""


# ---------------------------------------------------------------------------
# point counting


def _enumeration_cost(q: int, nvars: int) -> int:
    return sum(q**i for i in range(nvars))


def count_points(spec: PairSpec, m: int = 1, budget: int = 2_000_000) -> int:
    """Exact number of points of the pair's hypersurface over F_{p^m}.

    Straight projective specs enumerate one representative per class by
    fixing the leading nonzero coordinate to 1. Weighted specs count
    classes of the quotient chart by chart: on the chart x_i = 1 the
    residual stabilizer is the group of (q-1)-th roots of unity killed
    by the weight w_i, and each chart contributes its orbit count under
    that stabilizer."""
    if m < 1:
        raise ValueError("extension degree must be positive")
    q = spec.p**m
    nvars = spec.poly.nvars
    if not spec.is_weighted:
        cost = _enumeration_cost(q, nvars)
        if cost > budget:
            raise BudgetError(
                "enumeration needs %d evaluations, over the budget %d" % (cost, budget)
            )
        tables = FqTables(spec.p, m)
        evaluate = tables.poly_evaluator(spec.poly)
        return sum(1 for pt in projective_points(q, nvars) if evaluate(pt) == 0)

    weights = spec.weights
    # Burnside on the chart "first nonzero coordinate is i": a scalar of
    # multiplicative order e fixes exactly the coordinates whose weight
    # it divides, so its fixed points live on a coordinate subspace
    cost = 0
    plans = []
    for i in range(nvars):
        slices = []
        for e in _divisors(gcd(weights[i], q - 1)):
            live = [j for j in range(i + 1, nvars) if weights[j] % e == 0]
            slices.append((live, _euler_phi(e)))
            cost += q ** (len(live) + 1)
        plans.append((i, slices))
    if cost > budget:
        raise BudgetError(
            "weighted enumeration needs %d evaluations, over the budget %d" % (cost, budget)
        )

    tables = FqTables(spec.p, m)
    total = 0
    for i, slices in plans:
        for live, mult in slices:
            total += mult * _count_slice(spec, tables, i, live)
    orbits, rem = divmod(total, q - 1)
    if rem:
        raise AssertionError("weighted orbit count did not come out integral")
    return orbits


def _divisors(t: int) -> list:
    return [e for e in range(1, t + 1) if t % e == 0]


def _euler_phi(e: int) -> int:
    return sum(1 for r in range(1, e + 1) if gcd(r, e) == 1)


def _count_slice(spec: PairSpec, tables: FqTables, lead: int, live: list) -> int:
    """Solutions of the weighted-model polynomial with x_lead nonzero,
    coordinates before the lead zero, and later support inside
    ``live``."""
    poly = spec.poly
    remaining = list(range(poly.nvars))
    for pos in range(len(remaining) - 1, -1, -1):
        j = remaining[pos]
        if j != lead and (j < lead or j not in live):
            poly = poly.substitute_zero(pos)
            del remaining[pos]
    if poly.weights is not None:
        poly = SparsePoly(poly.terms, poly.nvars)
    evaluate = tables.poly_evaluator(poly)
    q = tables.q
    lead_pos = remaining.index(lead)
    # plain product enumeration; the budget check above already sized it
    count = 0
    for pt in product(range(q), repeat=len(remaining)):
        if pt[lead_pos] != 0 and evaluate(pt) == 0:
            count += 1
    return count


# ---------------------------------------------------------------------------
# curve numerators from counts


@dataclass(frozen=True)
class ZetaNumerator:
    """Integer polynomial det(1 - F T | middle primitive cohomology),
    constant term 1, plus the prime power it lives over."""

    coeffs: tuple
    q: int
    rank: int

    def __post_init__(self):
        if not self.coeffs or self.coeffs[0] != 1:
            raise ValueError("numerator must have constant term 1")
        if len(self.coeffs) - 1 != self.rank:
            raise ValueError("rank metadata disagrees with the degree")

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def __call__(self, x):
        acc = 0
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc


def curve_zeta_numerator(counts, q: int, genus: int) -> ZetaNumerator:
    """Recover P(T) = det(1 - F T | H^1) of a smooth curve from point
    counts over F_{q^m}, m = 1..M with M >= genus.

    Power sums s_m = (q^m + 1) - #C(F_{q^m}) feed Newton-Girard for the
    first half of the coefficients; the functional equation
    a_{2g-i} = q^{g-i} a_i supplies the rest. Counts beyond genus are
    consumed as consistency checks."""
    g = genus
    counts = list(counts)
    if g < 0:
        raise ValueError("genus must be non-negative")
    if len(counts) < g:
        raise CountConsistencyError(
            "need counts over at least %d extensions, got %d" % (g, len(counts))
        )
    if g == 0:
        num = ZetaNumerator((1,), q, 0)
    else:
        s = [q**m + 1 - counts[m - 1] for m in range(1, g + 1)]
        # e_i are elementary symmetric functions of the Frobenius
        # eigenvalues; Newton-Girard: k e_k = sum (-1)^{i-1} e_{k-i} s_i
        e = [Fraction(1)]
        for kk in range(1, g + 1):
            acc = Fraction(0)
            for i in range(1, kk + 1):
                acc += (-1) ** (i - 1) * e[kk - i] * s[i - 1]
            e.append(acc / kk)
        coeffs = [Fraction(1)] + [Fraction(0)] * (2 * g)
        for i in range(1, g + 1):
            coeffs[i] = (-1) ** i * e[i]
        for i in range(g):
            coeffs[2 * g - i] = q ** (g - i) * coeffs[i]
        ints = []
        for c in coeffs:
            if c.denominator != 1:
                raise CountConsistencyError(
                    "non-integral coefficient %s: counts do not come from a "
                    "smooth curve of genus %d" % (c, g)
                )
            ints.append(int(c))
        num = ZetaNumerator(tuple(ints), q, 2 * g)
    regenerated = zeta_point_counts(num, 1, q, len(counts))
    for m, (got, want) in enumerate(zip(regenerated, counts), start=1):
        if got != want:
            raise CountConsistencyError(
                "count over F_q^%d regenerates as %d but was given as %d" % (m, got, want)
            )
    return num


def power_sums(numerator: ZetaNumerator, upto: int) -> list:
    """Power sums of the inverse roots of the numerator (the Frobenius
    eigenvalues), by the Newton-Girard recursion run forward."""
    coeffs = numerator.coeffs
    deg = len(coeffs) - 1
    e = [(-1) ** i * coeffs[i] for i in range(deg + 1)]
    s = []
    for kk in range(1, upto + 1):
        acc = 0
        for i in range(1, min(kk - 1, deg) + 1):
            acc += (-1) ** (i - 1) * e[i] * s[kk - i - 1]
        if kk <= deg:
            acc += (-1) ** (kk - 1) * kk * e[kk]
        s.append(acc)
    return s


@dataclass(frozen=True)
class ZetaFunction:
    """Z(T) = P(T)^[(-1)^(n+1)] / ((1-T)(1-qT)...(1-q^n T))."""

    numerator: ZetaNumerator
    n: int
    q: int

    @property
    def numerator_exponent(self) -> int:
        return (-1) ** (self.n + 1)

    def denominator_factors(self) -> tuple:
        return tuple((1, -(self.q**i)) for i in range(self.n + 1))

    def counts(self, M: int) -> list:
        return zeta_point_counts(self.numerator, self.n, self.q, M)


def assemble_zeta(numerator: ZetaNumerator, n: int, q: int) -> ZetaFunction:
    if q != numerator.q:
        raise ValueError("numerator lives over q=%d, not %d" % (numerator.q, q))
    return ZetaFunction(numerator, n, q)


def zeta_point_counts(numerator: ZetaNumerator, n: int, q: int, M: int) -> list:
    """Counts #X(F_{q^m}) for m = 1..M read off the zeta function: the
    projective factors contribute sum q^{im}, the numerator its power
    sums with the sign of its placement."""
    eps = (-1) ** (n + 1)
    s = power_sums(numerator, M)
    out = []
    for m in range(1, M + 1):
        out.append(sum(q ** (i * m) for i in range(n + 1)) - eps * s[m - 1])
    return out


def functional_equation_sign(numerator: ZetaNumerator, genus: int):
    """The sign making T^{2g} q^g P(1/(qT)) = sign * P(T), or None if
    neither sign works (not a curve numerator)."""
    g = genus
    coeffs = numerator.coeffs
    q = numerator.q
    if len(coeffs) - 1 != 2 * g:
        return None
    for sign in (1, -1):
        if all(
            coeffs[2 * g - i] * q ** (i - g) == sign * coeffs[i]
            if i >= g
            else coeffs[2 * g - i] == sign * q ** (g - i) * coeffs[i]
            for i in range(2 * g + 1)
        ):
            return sign
    return None


def weil_bound_ok(numerator: ZetaNumerator, genus: int) -> bool:
    """|a_1| <= 2 g sqrt(q), checked by squaring (exact)."""
    if len(numerator.coeffs) < 2:
        return True
    a1 = numerator.coeffs[1]
    return a1 * a1 <= 4 * genus * genus * numerator.q


# ---------------------------------------------------------------------------
# characteristic polynomials along the pair sequence


def twist_T(coeffs, q: int) -> tuple:
    """T -> qT on an integer polynomial in T."""
    return tuple(c * q**i for i, c in enumerate(coeffs))


def poly_mul(f, g) -> tuple:
    out = [0] * (len(f) + len(g) - 1)
    for i, a in enumerate(f):
        if a:
            for j, b in enumerate(g):
                if b:
                    out[i + j] += a * b
    return tuple(out)


def split_charpoly(P, P_D_twisted) -> tuple:
    """Exact division P / P_D_twisted of integer polynomials in T; the
    determinant multiplies along the pair's exact sequence, so the
    quotient is the factor on the complementary piece."""
    num = list(P)
    den = list(P_D_twisted)
    while den and den[-1] == 0:
        den.pop()
    if not den:
        raise ZeroDivisionError("zero divisor polynomial")
    while num and num[-1] == 0:
        num.pop()
    if not num:
        return (0,)
    if len(num) < len(den):
        raise ValueError("division is not exact: degree of divisor too large")
    out = [0] * (len(num) - len(den) + 1)
    work = list(num)
    for i in range(len(out) - 1, -1, -1):
        c = Fraction(work[i + len(den) - 1], den[-1])
        if c.denominator != 1:
            raise ValueError("division is not exact: fractional quotient")
        out[i] = int(c)
        for j, b in enumerate(den):
            work[i + j] -= out[i] * b
    if any(work):
        raise ValueError("division is not exact: nonzero remainder")
    return tuple(out)


def points_charpoly_on_D(spec: PairSpec, twist: bool, *, primitive: bool = True) -> tuple:
    """det(1 - F T | H^0(D)) for a zero-dimensional divisor D given by a
    binary form: one cyclotomic-style factor (1 - T^r) per irreducible
    factor of degree r over F_p, the point at infinity included.

    ``primitive`` divides out one (1 - T); ``twist`` then applies
    T -> qT. A repeated factor means D is not smooth and raises."""
    if spec.n != 0:
        raise ValueError("divisor spec must be zero-dimensional")
    p = spec.p
    chart = spec.poly.substitute_one(spec.hyperplane_index)
    coeffs = [0] * (chart.degree() + 1 if chart else 1)
    for (e,), c in chart.terms.items():
        coeffs[e] = c % p
    f = uni_trim(coeffs, p)
    if not f:
        raise ValueError("binary form vanishes identically mod p")
    inf_mult = spec.d - (len(f) - 1)
    if inf_mult >= 2:
        raise ValueError("repeated root at infinity: divisor is not reduced")
    df = uni_deriv(f, p)
    if len(uni_gcd(f, df, p)) > 1:
        raise ValueError("repeated factor: divisor is not reduced")
    degrees = [1] * inf_mult
    remaining = f
    r = 1
    x = (0, 1)
    while len(remaining) - 1 >= 2 * r:
        frob = uni_powmod(x, p**r, remaining, p)
        delta = list(frob) + [0] * (2 - len(frob))
        delta[1] = (delta[1] - 1) % p
        h = uni_gcd(remaining, uni_trim(delta, p), p)
        if len(h) > 1:
            degrees.extend([r] * ((len(h) - 1) // r))
            remaining = uni_divmod(remaining, h, p)[0]
        r += 1
    if len(remaining) > 1:
        degrees.append(len(remaining) - 1)
    if sum(degrees) != spec.d:
        raise AssertionError("factor degrees do not add up to the form degree")
    out = (1,)
    for r in sorted(degrees):
        factor = (1,) + (0,) * (r - 1) + (-1,)
        out = poly_mul(out, factor)
    if primitive:
        out = split_charpoly(out, (1, -1))
    if twist:
        out = twist_T(out, p)
    return out


# ---------------------------------------------------------------------------
# Newton polygons


def newton_polygon(coeffs, p: int) -> HodgePolygon:
    """Lower hull of (i, ord_p(a_i)) over the nonzero coefficients of a
    polynomial with constant term 1."""
    if not coeffs or coeffs[0] != 1:
        raise ValueError("Newton polygon wants constant term 1")
    points = []
    for i, c in enumerate(coeffs):
        if c == 0:
            continue
        v = 0
        c = abs(c)
        while c % p == 0:
            c //= p
            v += 1
        points.append((i, v))
    return HodgePolygon.lower_hull(points)


def check_newton_above_hodge(newton: HodgePolygon, hodge: HodgePolygon):
    """True iff the Newton polygon lies on or above the Hodge polygon at
    every integer abscissa; on failure the witness abscissa rides
    along."""
    return newton.dominates(hodge)
