"""Bundled worked examples with frozen expected values.

Two fully worked pairs ship with the package: a degree-7 plane curve
over Z_(5) at twist 12 and a weighted degree-18 elliptic surface over
Z_(11) at twist 53, each with a published 36- resp. 34-form candidate
basis for its lattice. The verification command re-derives everything
from scratch and compares.

Expected values fall in two classes, kept separate on the record
type. ``expected_rank`` and ``point_counts`` are oracle values
(Hodge-number count, exhaustive enumeration). ``unit_determinant``
states the published claim that the candidate forms are a lattice
basis (change-of-basis determinant a p-adic unit); ``det_valuation``
pins the determinant valuation this implementation actually measures,
so drift in either direction is caught. The two disagree on both
worked pairs: the curve equation as published is singular mod 5 and
its form set spans index 5^4, and the surface form set spans index
11^5. Single-term repairs of the curve equation that restore a unit
determinant exist; the verification command reports the discrepancy
rather than papering over it.
"""

from __future__ import annotations

from dataclasses import dataclass

from .logdr import FormGenerator
from .sparsepoly import SparsePoly
from .specfile import SpecDocument
from .variety import PairSpec


@dataclass(frozen=True)
class WorkedExample:
    """One bundled pair: input document, candidate basis, expectations."""

    name: str
    document: SpecDocument
    expected_rank: int
    basis_forms: tuple
    form_labels: tuple
    point_counts: tuple      # frozen enumeration constants, m = 1..len
    unit_determinant: bool   # published claim under test
    det_valuation: int       # pinned measurement of this implementation

    @property
    def spec(self) -> PairSpec:
        return self.document.spec

    @property
    def k(self) -> int:
        return self.document.k


def curve_example() -> WorkedExample:
    """Degree-7 plane curve over Z_(5), twist 12, 36 candidate forms."""
    terms = {
        (7, 0, 0): 1, (6, 1, 0): 1, (5, 2, 0): 3, (3, 3, 1): 1,
        (2, 5, 0): 1, (2, 1, 4): 3, (1, 6, 0): 2, (1, 0, 6): 2,
        (0, 7, 0): 3, (0, 5, 2): 1, (0, 4, 3): 3, (0, 1, 6): 1,
        (0, 0, 7): 3,
    }
    spec = PairSpec(5, 1, 7, SparsePoly(terms, 3), 2)
    doc = SpecDocument(spec=spec, k=12, names=("x", "y", "z"))
    # staircase of monomial one-forms x^i y^j dy on the chart z = 1
    blocks = ((1, 10), (2, 9), (3, 8), (4, 5))
    forms = []
    labels = []
    for i, top in blocks:
        for j in range(top + 1):
            forms.append(FormGenerator((i, j), dx=(1,)))
            labels.append("x^%d*y^%d*dy" % (i, j))
    return WorkedExample(
        name="plane-curve-d7-p5",
        document=doc,
        expected_rank=36,
        basis_forms=tuple(forms),
        form_labels=tuple(labels),
        point_counts=(7, 27, 124),
        unit_determinant=True,
        det_valuation=4,
    )


def surface_example() -> WorkedExample:
    """Weighted degree-18 elliptic surface over Z_(11), twist 53.

    Coordinates (x, y, t, z) carry weights (6, 9, 1, 1); the equation
    is y^2 = x^3 + a(t,z) x + b(t,z) with deg a = 12, deg b = 18. The
    34 candidate forms x^a t^c dx dt / y live on the degree-18 cover
    chart, where they become unit multiples of the monomial classes
    X^(6a+5) Y^8 T^c w.
    """
    a_tz = {(12, 0): 1, (9, 3): 1, (2, 10): 3, (1, 11): 1, (0, 12): 1}
    b_tz = {(18, 0): 1, (17, 1): 2, (15, 3): 1, (7, 11): 1, (3, 15): 1,
            (0, 18): 1}
    terms = {(0, 2, 0, 0): 1, (3, 0, 0, 0): -1}
    for (i, j), c in a_tz.items():
        terms[(1, 0, i, j)] = -c
    for (i, j), c in b_tz.items():
        terms[(0, 0, i, j)] = -c
    weights = (6, 9, 1, 1)
    spec = PairSpec(11, 2, 18, SparsePoly(terms, 4, weights), 3, weights=weights)
    doc = SpecDocument(spec=spec, k=53, names=("x", "y", "t", "z"))
    pattern = [(0, c) for c in range(23)] + [(1, c) for c in range(11)]
    forms = tuple({(6 * a + 5, 8, c): 1} for a, c in pattern)
    labels = tuple("x^%d*t^%d*dx*dt/y" % (a, c) for a, c in pattern)
    return WorkedExample(
        name="weighted-surface-d18-p11",
        document=doc,
        expected_rank=34,
        basis_forms=forms,
        form_labels=labels,
        point_counts=(127,),
        unit_determinant=True,
        det_valuation=5,
    )


def elliptic_example() -> WorkedExample:
    """Elliptic curve y^2 z = x^3 + x z^2 + z^3 over F_5, sectioned by
    x = 0 (three distinct points). Zeta numerator 1 + 3T + 5T^2."""
    terms = {(0, 2, 1): 1, (3, 0, 0): -1, (1, 0, 2): -1, (0, 0, 3): -1}
    spec = PairSpec(5, 1, 3, SparsePoly(terms, 3), 0)
    doc = SpecDocument(spec=spec, k=6, names=("x", "y", "z"))
    return WorkedExample(
        name="elliptic-p5",
        document=doc,
        expected_rank=4,
        basis_forms=(),
        form_labels=(),
        point_counts=(9, 27, 108),
        unit_determinant=True,
        det_valuation=0,
    )


def worked_examples() -> tuple:
    """The two fully worked pairs, in verification order."""
    return (curve_example(), surface_example())
