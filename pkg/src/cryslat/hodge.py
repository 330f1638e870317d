"""Hodge numbers of smooth hypersurfaces and the polygons built from them.

Everything here is generating-function combinatorics: the primitive
Hodge numbers of a smooth degree-d hypersurface of dimension N are read
off the Hilbert series of the Jacobian-type grading,

    h^{N-j,j}_prim = [t^{(j+1)d - (N+2)}] ((1 - t^{d-1}) / (1 - t))^{N+2},

and the weighted (group-invariant) refinement counts only monomials
whose diagonal character matches the character forced on the holomorphic
volume form, via inclusion-exclusion over the same Koszul resolution.

A pair glues the hypersurface numbers to those of its smooth hyperplane
section one dimension down. The resulting slope/width data becomes a
HodgePolygon, the lower-convex graph whose integer heights drive every
precision bound in the planner.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations


def _truncated_power(d: int, nvars: int, top: int) -> list[int]:
    """Coefficients of ((1 - t^{d-1})/(1 - t))^{nvars} up to degree top."""
    block = [1] * min(d - 1, top + 1)
    coeffs = [1] + [0] * top
    for _ in range(nvars):
        nxt = [0] * (top + 1)
        for i, c in enumerate(coeffs):
            if c == 0:
                continue
            for j, b in enumerate(block):
                if i + j > top:
                    break
                nxt[i + j] += c * b
        coeffs = nxt
    return coeffs


def primitive_hodge_numbers(N: int, d: int) -> tuple:
    """(h^{N,0}, h^{N-1,1}, ..., h^{0,N}) of the primitive middle
    cohomology of a smooth degree-d hypersurface of dimension N."""
    if N < 0:
        raise ValueError("dimension must be nonnegative")
    if d < 1:
        raise ValueError("degree must be positive")
    if d == 1:
        return (0,) * (N + 1)
    top = (N + 1) * d - (N + 2)
    series = _truncated_power(d, N + 2, max(top, 0))
    out = []
    for j in range(N + 1):
        want = (j + 1) * d - (N + 2)
        out.append(series[want] if 0 <= want <= top else 0)
    return tuple(out)


def full_middle_betti(N: int, d: int) -> int:
    """Middle Betti number including the non-primitive class in even
    dimension."""
    total = sum(primitive_hodge_numbers(N, d))
    return total + (1 if N % 2 == 0 else 0)


def _constrained_counts(nvars: int, residues: tuple, moduli: tuple, top: int) -> list[int]:
    """count[e] of monomials in nvars variables of total degree e whose
    exponent in variable i is congruent to residues[i] mod moduli[i]."""
    coeffs = [1] + [0] * top
    for r, a in zip(residues, moduli):
        start = r % a
        nxt = [0] * (top + 1)
        for i, c in enumerate(coeffs):
            if c == 0:
                continue
            for j in range(start, top - i + 1, a):
                nxt[i + j] += c
        coeffs = nxt
    return coeffs


def invariant_primitive_hodge_numbers(N: int, d: int, weights: tuple) -> tuple:
    """Primitive Hodge numbers of the quotient of a smooth degree-d
    hypersurface of dimension N by the diagonal weight action.

    weights[i] is the order of the character acting on variable i; a
    monomial survives when each exponent vector matches, coordinatewise
    mod weights, the character of the volume form (exponent -1 in every
    variable). Inclusion-exclusion over subsets of variables removes the
    Jacobian-ideal part, mirroring the unweighted Koszul computation."""
    if len(weights) != N + 2:
        raise ValueError("weight vector length disagrees with the variable count")
    if any(a < 1 for a in weights):
        raise ValueError("weights must be positive")
    if d == 1:
        return (0,) * (N + 1)
    nvars = N + 2
    top = (N + 1) * d - nvars
    if top < 0:
        return (0,) * (N + 1)

    tables = {}
    base = tuple((-1) % a for a in weights)
    for r in range(nvars + 1):
        for subset in combinations(range(nvars), r):
            residues = tuple(
                (base[i] + (1 if i in subset else 0)) % weights[i] for i in range(nvars)
            )
            tables[subset] = _constrained_counts(nvars, residues, weights, top)

    out = []
    for j in range(N + 1):
        want = (j + 1) * d - nvars
        if not 0 <= want <= top:
            out.append(0)
            continue
        total = 0
        for subset, table in tables.items():
            e = want - len(subset) * (d - 1)
            if e < 0:
                continue
            total += (-1) ** len(subset) * table[e]
        out.append(total)
    return tuple(out)


def pair_hodge_numbers(
    n: int, d: int, weights: tuple | None = None, hyperplane_index: int | None = None
) -> tuple:
    """(v_0, ..., v_n) with v_i the rank of the i-th graded piece of the
    pair cohomology: hypersurface primitive numbers plus, for i >= 1,
    the section's primitive numbers shifted one step.

    With weights, both layers are replaced by their invariant
    refinements; the section drops the hyperplane coordinate, so its
    index must be given."""
    if weights is None or all(a == 1 for a in weights):
        hyper = primitive_hodge_numbers(n, d)
        section = primitive_hodge_numbers(n - 1, d) if n >= 1 else ()
    else:
        if hyperplane_index is None:
            raise ValueError("weighted pair numbers need the hyperplane index")
        hyper = invariant_primitive_hodge_numbers(n, d, tuple(weights))
        sw = tuple(weights[:hyperplane_index] + weights[hyperplane_index + 1 :])
        section = invariant_primitive_hodge_numbers(n - 1, d, sw) if n >= 1 else ()
    out = []
    for i in range(n + 1):
        v = hyper[n - i]
        if i >= 1:
            v += section[n - i]
        out.append(v)
    return tuple(out)


@dataclass(frozen=True)
class HodgePolygon:
    """A lower-convex piecewise-linear graph through (0, 0), stored by
    its vertices. Heights are exact rationals."""

    vertices: tuple

    def __post_init__(self):
        verts = tuple((Fraction(x), Fraction(y)) for x, y in self.vertices)
        if not verts:
            raise ValueError("a polygon needs at least one vertex")
        for (x0, _), (x1, _) in zip(verts, verts[1:]):
            if x1 <= x0:
                raise ValueError("vertex abscissae must increase")
        slopes = [
            (y1 - y0) / (x1 - x0) for (x0, y0), (x1, y1) in zip(verts, verts[1:])
        ]
        if any(s1 < s0 for s0, s1 in zip(slopes, slopes[1:])):
            raise ValueError("vertices are not lower-convex")
        object.__setattr__(self, "vertices", verts)

    @classmethod
    def from_slope_widths(cls, pairs) -> "HodgePolygon":
        """Build from (slope, width) pairs; zero widths are dropped and
        slopes must come in increasing order."""
        x = Fraction(0)
        y = Fraction(0)
        verts = [(x, y)]
        last = None
        for slope, width in pairs:
            if width < 0:
                raise ValueError("widths must be nonnegative")
            if width == 0:
                continue
            if last is not None and slope <= last:
                raise ValueError("slopes must increase")
            last = slope
            x += width
            y += Fraction(slope) * width
            verts.append((x, y))
        return cls(tuple(verts))

    @classmethod
    def lower_hull(cls, points) -> "HodgePolygon":
        """Lower convex hull of a point set (finite ordinates only)."""
        pts = sorted((Fraction(x), Fraction(y)) for x, y in points)
        if not pts:
            raise ValueError("no points")
        best = {}
        for x, y in pts:
            if x not in best or y < best[x]:
                best[x] = y
        pts = sorted(best.items())
        hull = []
        for pt in pts:
            while len(hull) >= 2:
                (x0, y0), (x1, y1) = hull[-2], hull[-1]
                # drop hull[-1] if it sits on or above the chord
                if (y1 - y0) * (pt[0] - x0) >= (pt[1] - y0) * (x1 - x0):
                    hull.pop()
                else:
                    break
            hull.append(pt)
        return cls(tuple(hull))

    @property
    def width(self) -> Fraction:
        return self.vertices[-1][0] - self.vertices[0][0]

    def height(self, x) -> Fraction:
        x = Fraction(x)
        verts = self.vertices
        if x < verts[0][0] or x > verts[-1][0]:
            raise ValueError("abscissa %s outside [%s, %s]" % (x, verts[0][0], verts[-1][0]))
        for (x0, y0), (x1, y1) in zip(verts, verts[1:]):
            if x <= x1:
                return y0 + (y1 - y0) * (x - x0) / (x1 - x0)
        return verts[-1][1]

    def slopes_with_widths(self) -> tuple:
        return tuple(
            ((y1 - y0) / (x1 - x0), x1 - x0)
            for (x0, y0), (x1, y1) in zip(self.vertices, self.vertices[1:])
        )

    def dominates(self, other: "HodgePolygon"):
        """Check self >= other at every integer abscissa of ``other``
        (and at its right endpoint). Returns (True, None) or
        (False, first offending abscissa); an abscissa self does not
        reach counts as an offense."""
        xmax = other.vertices[-1][0]
        probes = list(range(int(xmax) + 1))
        if xmax != int(xmax):
            probes.append(xmax)
        for x in probes:
            try:
                h = self.height(x)
            except ValueError:
                return False, Fraction(x)
            if h < other.height(x):
                return False, Fraction(x)
        return True, None


def hodge_polygon(pair_numbers) -> HodgePolygon:
    """Polygon of a pair Hodge vector: slope i with width v_i."""
    return HodgePolygon.from_slope_widths(
        (i, w) for i, w in enumerate(pair_numbers)
    )
