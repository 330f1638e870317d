"""Hypersurface pairs and their affine charts.

A PairSpec pins down the arithmetic situation the rest of the library
works on: a prime p, a smooth degree-d hypersurface in projective
(n+1)-space cut out by an integer polynomial Q, and the smooth divisor
sliced out of it by one coordinate hyperplane. The integer coefficients
of Q are simultaneously the lift used for exact p-local work and, mod
p, the equation of the special fibre.

In the weighted case the spec carries a positive weight vector; Q is
then the quotient-model polynomial, weighted-homogeneous of weighted
degree d, and ``cover()`` produces the straight-homogeneous equation of
the covering hypersurface by substituting x_i -> x_i^{a_i}. Geometric
computations (charts, probes, lattices) run on the cover; the weights
survive as the character data for invariant filtering.

Smoothness is probed, not proved: ``smoothness_probe`` searches for
singular points over F_{p^m} for m up to a requested depth and reports
the first witness in enumeration order, or a clean pass.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import combinations, product

from .rings import ExtField, PrimeField, is_prime
from .sparsepoly import SparsePoly


class SpecError(ValueError):
    pass


def homogenize(poly: SparsePoly, d: int, position: int, weight: int = 1) -> SparsePoly:
    """Insert a variable at ``position`` raising every term to weighted
    degree d. Errors if some term already exceeds d (no negative
    exponents)."""
    base_weights = poly.weights

    def missing(exps):
        have = (
            sum(exps)
            if base_weights is None
            else sum(a * e for a, e in zip(base_weights, exps))
        )
        gap = d - have
        if gap % weight:
            raise SpecError(
                "term of degree %d cannot reach degree %d in steps of %d" % (have, d, weight)
            )
        return gap // weight

    new_weights = weight if base_weights is not None else None
    return poly.insert_variable(position, missing, new_weights)


@dataclass(frozen=True)
class PairSpec:
    """A hypersurface pair: degree-d hypersurface in P^{n+1} over F_p
    (with an integer lift of the equation) plus the section by the
    coordinate hyperplane ``hyperplane_index``."""

    p: int
    n: int
    d: int
    poly: SparsePoly
    hyperplane_index: int
    weights: tuple | None = None

    def __post_init__(self):
        if not is_prime(self.p):
            raise SpecError("%d is not prime" % self.p)
        if self.n < 0:
            raise SpecError("dimension must be nonnegative")
        if self.d < 1:
            raise SpecError("degree must be positive")
        nvars = self.n + 2
        if self.poly.nvars != nvars:
            raise SpecError(
                "polynomial has %d variables, expected %d" % (self.poly.nvars, nvars)
            )
        if not 0 <= self.hyperplane_index < nvars:
            raise SpecError("hyperplane index out of range")
        if self.weights is not None:
            if len(self.weights) != nvars:
                raise SpecError("weight vector length disagrees with the variable count")
            if any(w < 1 for w in self.weights):
                raise SpecError("weights must be positive")
            for i in range(nvars):
                rest = [w for j, w in enumerate(self.weights) if j != i]
                g = 0
                for w in rest:
                    g = math.gcd(g, w)
                if g != 1:
                    raise SpecError(
                        "weights %r fail the well-formedness condition: dropping "
                        "coordinate %d leaves gcd %d" % (self.weights, i, g)
                    )
            if self.poly.weights != tuple(self.weights):
                object.__setattr__(self, "poly", SparsePoly(self.poly.terms, nvars, self.weights))
        if not self.poly.reduce_mod(self.p):
            raise SpecError("polynomial vanishes mod %d" % self.p)
        if not self.poly.is_homogeneous(self.d):
            kind = "weighted-homogeneous" if self.weights else "homogeneous"
            raise SpecError("polynomial is not %s of degree %d" % (kind, self.d))

    @property
    def is_weighted(self) -> bool:
        return self.weights is not None and any(w != 1 for w in self.weights)

    def cover(self) -> "PairSpec":
        """The straight-homogeneous covering hypersurface: substitute
        x_i -> x_i^{a_i}. Identity for unweighted specs."""
        if not self.is_weighted:
            if self.weights is None:
                return self
            return PairSpec(self.p, self.n, self.d, SparsePoly(self.poly.terms, self.poly.nvars),
                            self.hyperplane_index, None)
        stretched = self.poly.stretch_exponents(self.weights)
        return PairSpec(self.p, self.n, self.d, stretched, self.hyperplane_index, None)

    def affine_chart(self) -> "AffineChart":
        return dehomogenize(self)

    def hyperplane_section(self) -> "PairSpec":
        return hyperplane_section(self)


@dataclass(frozen=True)
class AffineChart:
    """The affine complement of the hyperplane section, as the chart
    polynomial q = Q(..., 1, ...) in the n+1 remaining variables.

    ``degenerate_degree`` flags deg q < d, which happens exactly when Q
    has no hyperplane-free monomial of top degree; the section then
    passes through the distinguished coordinate point."""

    spec: PairSpec
    poly: SparsePoly  # the chart polynomial, integer coefficients

    @property
    def p(self) -> int:
        return self.spec.p

    @property
    def n(self) -> int:
        return self.spec.n

    @property
    def d(self) -> int:
        return self.spec.d

    @property
    def nvars(self) -> int:
        return self.spec.n + 1

    @property
    def degenerate_degree(self) -> bool:
        return self.poly.degree() < self.d

    def partials(self):
        return [self.poly.derivative(i) for i in range(self.nvars)]

    def rehomogenize(self) -> SparsePoly:
        return homogenize(self.poly, self.d, self.spec.hyperplane_index)


def dehomogenize(spec: PairSpec) -> AffineChart:
    """Substitute 1 for the hyperplane coordinate. For weighted specs
    this runs on the cover, which is where all chart-level work
    happens."""
    base = spec.cover() if spec.is_weighted else spec
    chart_poly = base.poly.substitute_one(spec.hyperplane_index)
    if chart_poly.weights is not None:
        chart_poly = SparsePoly(chart_poly.terms, chart_poly.nvars)
    return AffineChart(spec, chart_poly)


def hyperplane_section(spec: PairSpec) -> PairSpec:
    """The divisor cut out by the hyperplane, as a spec one dimension
    down (same degree, hyperplane coordinate removed)."""
    if spec.n < 1:
        raise SpecError("a 0-dimensional spec has no section")
    section_poly = spec.poly.substitute_zero(spec.hyperplane_index)
    if not section_poly.reduce_mod(spec.p):
        raise SpecError("section polynomial vanishes mod p: hyperplane divides Q")
    weights = None
    if spec.weights is not None:
        weights = (
            spec.weights[: spec.hyperplane_index] + spec.weights[spec.hyperplane_index + 1 :]
        )
    return PairSpec(
        spec.p, spec.n - 1, spec.d, section_poly, section_poly.nvars - 1, weights
    )


# ---------------------------------------------------------------------------
# finite-field evaluation tables and the smoothness probe


class FqTables:
    """Multiplication/addition tables for F_{p^m}, with elements handled
    as indices 0..q-1. Index c < p is the constant c, and the index of a
    general element reads its coefficient vector as base-p digits, the
    constant digit fastest. Pure table lookups keep the enumeration
    loops free of object arithmetic."""

    def __init__(self, p: int, m: int):
        self.p = p
        self.m = m
        self.q = p**m
        if m == 1:
            field = PrimeField(p)
            elems = [field(v) for v in range(p)]
        else:
            field = ExtField(p, m)
            elems = list(field.elements())
        self.field = field
        self.elements = elems
        index = {e: i for i, e in enumerate(elems)}
        self.add = [[index[a + b] for b in elems] for a in elems]
        self.mul = [[index[a * b] for b in elems] for a in elems]
        self._index = index

    def pow_table(self, max_exp: int):
        """pow[i][e] = index of elements[i] ** e for e <= max_exp."""
        table = []
        for i in range(self.q):
            row = [1] * (max_exp + 1)  # exponent 0 gives the constant 1
            acc = 1
            for e in range(1, max_exp + 1):
                acc = self.mul[acc][i]
                row[e] = acc
            table.append(row)
        return table

    def poly_evaluator(self, poly: SparsePoly):
        """Compile a polynomial into a fast index-level evaluator."""
        terms = []
        max_exp = 0
        for exps, c in poly.sorted_terms():
            ci = c % self.p  # constants embed at their own index
            if ci == 0:
                continue
            packed = tuple((i, e) for i, e in enumerate(exps) if e)
            terms.append((ci, packed))
            for _, e in packed:
                max_exp = max(max_exp, e)
        ptab = self.pow_table(max_exp)
        add, mul = self.add, self.mul

        def evaluate(point):
            total = 0
            for ci, packed in terms:
                acc = ci
                for var, e in packed:
                    acc = mul[acc][ptab[point[var]][e]]
                total = add[total][acc]
            return total

        return evaluate


def projective_points(q: int, nvars: int):
    """Canonical representatives of P^{nvars-1}(F_q) as index tuples, in
    ascending lexicographic order (so (0, ..., 0, 1) comes first)."""
    for lead in range(nvars - 1, -1, -1):
        prefix = (0,) * lead + (1,)
        for rest in product(range(q), repeat=nvars - 1 - lead):
            yield prefix + rest


@dataclass(frozen=True)
class ProbeReport:
    passed: bool
    depth: int
    points_checked: int
    witness_extension: int | None = None
    witness_point: tuple | None = None

    def __bool__(self):
        return self.passed


def smoothness_probe(spec: PairSpec, depth: int = 1, budget: int = 2_000_000) -> ProbeReport:
    """Search P^{n+1}(F_{p^m}), m <= depth, for common zeros of Q and all
    its partials. Weighted specs are probed on the smooth cover. A pass
    is evidence, not proof; a witness is a disproof.

    Points are scanned in ascending lexicographic order per extension,
    so the reported witness is the smallest one at the smallest m."""
    base = spec.cover() if spec.is_weighted else spec
    polys = [base.poly] + [base.poly.derivative(i) for i in range(base.poly.nvars)]
    checked = 0
    for m in range(1, depth + 1):
        q = spec.p**m
        npoints = sum(q**i for i in range(base.poly.nvars))
        if checked + npoints > budget:
            raise SpecError(
                "probe at depth %d needs %d points, over the budget %d"
                % (m, checked + npoints, budget)
            )
        tables = FqTables(spec.p, m)
        evaluators = [tables.poly_evaluator(f) for f in polys]
        for pt in projective_points(q, base.poly.nvars):
            checked += 1
            if all(ev(pt) == 0 for ev in evaluators):
                return ProbeReport(False, m, checked, m, pt)
    return ProbeReport(True, depth, checked)
