"""Exact p-local lattices of logarithmic top forms on a chart.

The model: on the affine chart q = 0 is the hypersurface, and linear
algebra happens in the w-coordinate space spanned by monomials h * w
with deg h <= k + d - n - 1, where w is the dlog-normalized volume form
of the chart. Two subspaces are divided out:

  * relations  q * m * w            for deg m <= k - n - 1,
  * exact forms d(h dx_J), |J| = n-1, deg h <= k - (n - 1), together
    with the q-multiplied family d(q h' dx_J), deg h' <= k - (n-1) - d.

The lattice generators are the w-model monomials themselves. Ambient
n-forms h dx_I convert into the model through the chart Jacobian:
writing c for the one index missing from I,

    h dx_I  =  (-1)^c h (dq/dx_c) w        (c counted from 0),

because dq wedge (anything) restricts to zero on the hypersurface.

The lattice is the image of the generator span in the quotient vector
space, computed p-locally with exact arithmetic in two stages. The
subspace rows go into a saturating echelon engine (saturating the
subspace is what discards p-torsion from the quotient; the ledger
records how much p-content the rows shed). Each generator is then
reduced against that engine and inserted into a plain echelon whose
pivot rows are the lattice basis: the image itself, never enlarged,
since the target of the comparison map is torsion-free by fiat. The
rank is cross-checked against the Hodge-number oracle; a mismatch
aborts.

For weighted specs every generator is first filtered by the diagonal
character of the weight action on the covering chart, producing the
invariant lattice of the quotient.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations

from .hodge import pair_hodge_numbers
from .linalg import PLocalEchelon
from .precision import torsion_exponent
from .sparsepoly import SparsePoly
from .variety import AffineChart, PairSpec


class LatticeRankError(RuntimeError):
    """Computed lattice rank disagrees with the Hodge-number oracle."""


@dataclass(frozen=True)
class TwistBound:
    """Smallest twist k making the lattice computation well-posed."""

    n: int
    d: int
    minimal: int

    def admits(self, k: int) -> bool:
        return k >= self.minimal


def pole_bound_k(n: int, d: int) -> TwistBound:
    """The twist must clear both pole-order thresholds: n*d from the
    chart volume form and (n+1)*d - (n+2) from the top Jacobian-ring
    graded piece."""
    if n < 0 or d < 1:
        raise ValueError("need n >= 0 and d >= 1")
    return TwistBound(n, d, max(n * d, (n + 1) * d - (n + 2)) + 1)


@dataclass(frozen=True)
class FormGenerator:
    """A monomial differential form on the chart: coeff * x^exps * dx_I,
    or coeff * x^exps * w when ``omega`` is set."""

    exps: tuple
    dx: tuple = ()
    coeff: int = 1
    omega: bool = False

    def __post_init__(self):
        if self.omega and self.dx:
            raise ValueError("a w-model generator carries no dx factors")
        if list(self.dx) != sorted(set(self.dx)):
            raise ValueError("dx indices must be strictly increasing")
        if any(e < 0 for e in self.exps) or any(i < 0 for i in self.dx):
            raise ValueError("negative exponent or variable index")

    @property
    def degree(self) -> int:
        return sum(self.exps)


def monomials_up_to(nvars: int, bound: int):
    """All exponent tuples with total degree <= bound."""
    if bound < 0 or nvars < 0:
        return
    if nvars == 0:
        yield ()
        return
    for e in range(bound + 1):
        for rest in monomials_up_to(nvars - 1, bound - e):
            yield (e,) + rest


def section_generators(chart: AffineChart, j: int, k: int, model: str | None = None) -> list:
    """Monomial generators of the j-th graded piece in twist k.

    For j < n these are ambient j-forms h dx_I with deg h <= k - j. The
    top piece j = n defaults to the w-model (deg h <= k + d - n - 1);
    pass model="ambient" for the raw h dx_I presentation with
    deg h <= k - n."""
    n = chart.n
    if not 0 <= j <= n:
        raise ValueError("form degree %d outside 0..%d" % (j, n))
    if model not in (None, "ambient", "omega"):
        raise ValueError("unknown model %r" % model)
    if model == "omega" and j != n:
        raise ValueError("only top forms have a w-model")
    use_omega = j == n and model != "ambient"
    out = []
    if use_omega:
        bound = k + chart.d - n - 1
        for exps in sorted(monomials_up_to(chart.nvars, bound)):
            out.append(FormGenerator(exps, omega=True))
        return out
    bound = k - j
    for dx in combinations(range(chart.nvars), j):
        for exps in sorted(monomials_up_to(chart.nvars, bound)):
            out.append(FormGenerator(exps, dx=dx))
    return out


# ---------------------------------------------------------------------------
# conversion into the w-model


def _jacobian(chart: AffineChart):
    return [chart.poly.derivative(i).terms for i in range(chart.nvars)]


def _add_exps(a, b):
    return tuple(x + y for x, y in zip(a, b))


def omega_coordinates(chart: AffineChart, gen: FormGenerator) -> dict:
    """The w-model coefficient polynomial of a top-degree generator, as
    an exponent-tuple -> integer dict."""
    if gen.omega:
        return {gen.exps: gen.coeff} if gen.coeff else {}
    n = chart.n
    if len(gen.dx) != n:
        raise ValueError("only n-forms convert to the w-model")
    missing = [i for i in range(chart.nvars) if i not in gen.dx]
    c = missing[0]
    sign = -1 if c % 2 else 1
    out = {}
    for pexps, pc in chart.poly.derivative(c).terms.items():
        key = _add_exps(gen.exps, pexps)
        v = out.get(key, 0) + sign * gen.coeff * pc
        if v:
            out[key] = v
        else:
            out.pop(key, None)
    return out


def _accumulate(target: dict, source: dict):
    for key, v in source.items():
        w = target.get(key, 0) + v
        if w:
            target[key] = w
        else:
            target.pop(key, None)


def exterior_derivative(chart: AffineChart, coeff_poly, J: tuple) -> dict:
    """d(f dx_J) for an (n-1)-subset J, as a w-model vector."""
    if isinstance(coeff_poly, SparsePoly):
        terms = coeff_poly.terms
    else:
        terms = dict(coeff_poly)
    out = {}
    for exps, c in terms.items():
        for i in range(chart.nvars):
            if i in J or exps[i] == 0:
                continue
            tau = -1 if sum(1 for j in J if j < i) % 2 else 1
            dexps = tuple(e - 1 if t == i else e for t, e in enumerate(exps))
            gen = FormGenerator(dexps, tuple(sorted(J + (i,))), c * exps[i] * tau)
            _accumulate(out, omega_coordinates(chart, gen))
    return out


def relation_subspace(chart: AffineChart, k: int) -> list:
    """w-model rows of q * m * w over monomials deg m <= k - n - 1,
    highest degree first."""
    n = chart.n
    qterms = chart.poly.terms
    rows = []
    for m in sorted(monomials_up_to(chart.nvars, k - n - 1), key=lambda e: (-sum(e), e)):
        row = {}
        for qe, qc in qterms.items():
            _accumulate(row, {_add_exps(m, qe): qc})
        rows.append(row)
    return rows


def exact_subspace(chart: AffineChart, k: int) -> list:
    """w-model rows of d(h dx_J) and d(q h' dx_J), |J| = n - 1,
    highest degree first within each family."""
    n = chart.n
    if n < 1:
        return []
    rows = []
    key = lambda e: (-sum(e), e)
    for J in combinations(range(chart.nvars), n - 1):
        for h in sorted(monomials_up_to(chart.nvars, k - (n - 1)), key=key):
            rows.append(exterior_derivative(chart, {h: 1}, J))
        for h in sorted(monomials_up_to(chart.nvars, k - (n - 1) - chart.d), key=key):
            shifted = {_add_exps(h, qe): qc for qe, qc in chart.poly.terms.items()}
            rows.append(exterior_derivative(chart, shifted, J))
    return rows


# ---------------------------------------------------------------------------
# weight characters


def _character_data(chart: AffineChart):
    """Per-variable characters of the diagonal weight action on the
    covering chart, or None when the action is trivial.

    Returns (moduli, var_chars, omega_char) with characters as residue
    tuples indexed by the original projective coordinates. The chart
    variable sitting at original position i transforms by e_i - e_l
    (l the dehomogenized coordinate), and the volume form by
    sum(dx chars) - char(q)."""
    spec = chart.spec
    if spec.weights is None or not spec.is_weighted:
        return None
    moduli = spec.weights
    nproj = len(moduli)
    ell = spec.hyperplane_index
    var_chars = []
    for j in range(chart.nvars):
        orig = j if j < ell else j + 1
        vec = [0] * nproj
        vec[orig] += 1
        vec[ell] -= 1
        var_chars.append(tuple(v % a for v, a in zip(vec, moduli)))

    def char_of_exps(exps):
        vec = [0] * nproj
        for j, e in enumerate(exps):
            if e:
                for t in range(nproj):
                    vec[t] += e * var_chars[j][t]
        return tuple(v % a for v, a in zip(vec, moduli))

    qchars = {char_of_exps(exps) for exps in chart.poly.terms}
    if len(qchars) != 1:
        raise ValueError("chart polynomial is not a character eigenvector")
    qchar = qchars.pop()
    vec = [0] * nproj
    for j in range(chart.nvars):
        for t in range(nproj):
            vec[t] += var_chars[j][t]
    for t in range(nproj):
        vec[t] -= qchar[t]
    omega_char = tuple(v % a for v, a in zip(vec, moduli))
    return moduli, var_chars, char_of_exps, omega_char


def _chart_poly_character(chart: AffineChart, data):
    """Character of the chart polynomial (already validated to be an
    eigenvector by _character_data)."""
    _, _, char_of_exps, _ = data
    return char_of_exps(next(iter(chart.poly.terms)))


def generator_character(chart: AffineChart, gen: FormGenerator):
    """Residue tuple of the weight character acting on a generator, or
    None for an unweighted chart."""
    data = _character_data(chart)
    if data is None:
        return None
    moduli, var_chars, char_of_exps, omega_char = data
    vec = list(char_of_exps(gen.exps))
    for i in gen.dx:
        for t in range(len(moduli)):
            vec[t] += var_chars[i][t]
    if gen.omega:
        for t in range(len(moduli)):
            vec[t] += omega_char[t]
    return tuple(v % a for v, a in zip(vec, moduli))


def invariant_filter(chart: AffineChart, generators) -> list:
    """Keep the generators fixed by the weight action. With trivial
    weights everything survives."""
    data = _character_data(chart)
    gens = list(generators)
    if data is None:
        return gens
    moduli, var_chars, char_of_exps, omega_char = data
    zero = tuple(0 for _ in moduli)

    def char(gen):
        vec = list(char_of_exps(gen.exps))
        for i in gen.dx:
            for t in range(len(moduli)):
                vec[t] += var_chars[i][t]
        if gen.omega:
            for t in range(len(moduli)):
                vec[t] += omega_char[t]
        return tuple(v % a for v, a in zip(vec, moduli))

    return [g for g in gens if char(g) == zero]


# ---------------------------------------------------------------------------
# the lattice pipeline


@dataclass(frozen=True)
class LatticeBasis:
    """A basis of the twisted top cohomology lattice of a pair.

    ``columns`` lists every modeled w-monomial in reduction order
    (total degree descending); ``basis`` holds one integer row vector
    per lattice generator, each a tuple of (exponents, coefficient)
    pairs in column order, sorted by pivot column with positive pivot
    entry. ``saturation_ledger`` totals the p-valuations shed while
    saturating the subspace rows; ``torsion_bound`` is the proved
    exponent bound for denominators met when reducing integral forms."""

    p: int
    n: int
    d: int
    k: int
    rank: int
    torsion_bound: int
    saturation_ledger: int
    hodge_vector: tuple
    invariant: bool
    columns: tuple
    basis: tuple
    chart: AffineChart = field(repr=False, compare=False)
    engine: PLocalEchelon = field(repr=False, compare=False)
    quotient: PLocalEchelon = field(repr=False, compare=False)
    quotient_order: tuple = field(repr=False, compare=False)
    column_index: dict = field(repr=False, compare=False)

    def basis_polynomials(self) -> list:
        """The basis vectors as w-model coefficient polynomials."""
        nv = self.chart.nvars
        return [SparsePoly(dict(row), nv) for row in self.basis]


@dataclass(frozen=True)
class ReducedForm:
    """Coordinates of a form in a lattice basis, with the p-power needed
    to clear denominators (the torsion certificate)."""

    coordinates: tuple
    torsion_exponent: int

    def is_integral(self) -> bool:
        return self.torsion_exponent == 0


def lattice_basis(spec: PairSpec, k: int | None = None) -> LatticeBasis:
    """Compute the twist-k lattice of the pair. For weighted specs this
    is the invariant lattice of the quotient; ``invariant_lattice_basis``
    is an explicit alias."""
    bound = pole_bound_k(spec.n, spec.d)
    if k is None:
        k = bound.minimal
    if not bound.admits(k):
        raise ValueError(
            "twist %d below the minimal admissible value %d" % (k, bound.minimal)
        )
    if spec.n < 1:
        raise ValueError("the lattice pipeline needs a pair of dimension >= 1")
    chart = spec.affine_chart()
    n, d, p = spec.n, spec.d, spec.p

    data = _character_data(chart)
    if data is None:
        col_ok = lambda exps: True
    else:
        moduli, var_chars, char_of_exps, omega_char = data
        zero = tuple(0 for _ in moduli)

        def col_ok(exps):
            vec = char_of_exps(exps)
            return (
                tuple((v + o) % a for v, o, a in zip(vec, omega_char, moduli)) == zero
            )

    top = k + d - n - 1
    columns = sorted(
        (e for e in monomials_up_to(chart.nvars, top) if col_ok(e)),
        key=lambda e: (-sum(e), e),
    )
    column_index = {e: i for i, e in enumerate(columns)}

    def to_indices(row):
        out = {}
        for exps, v in row.items():
            try:
                out[column_index[exps]] = v
            except KeyError:
                raise AssertionError(
                    "subspace row leaves the modeled column set at %r" % (exps,)
                ) from None
        return out

    engine = PLocalEchelon(p, saturate=True)

    # invariance of q * m * w and of (q h') dx_J involves the character
    # of q itself, which is trivial in the unweighted case and whenever
    # the dehomogenized coordinate has weight 1
    if data is None:
        rel_ok = lambda m: True
        hq_ok = lambda gen: True
    else:
        qchar = _chart_poly_character(chart, data)

        def rel_ok(m):
            vec = char_of_exps(m)
            total = tuple(
                (v + qc + oc) % a
                for v, qc, oc, a in zip(vec, qchar, omega_char, moduli)
            )
            return total == zero

        def hq_ok(gen):
            c = generator_character(chart, gen)
            return tuple((v + qc) % a for v, qc, a in zip(c, qchar, moduli)) == zero

    qterms = chart.poly.terms
    rel_monomials = [m for m in monomials_up_to(chart.nvars, k - n - 1) if rel_ok(m)]
    rel_monomials.sort(key=lambda e: (-sum(e), e))
    for m in rel_monomials:
        row = {}
        for qe, qc in qterms.items():
            _accumulate(row, {_add_exps(m, qe): qc})
        engine.insert(to_indices(row))

    key = lambda e: (-sum(e), e)
    for J in combinations(range(chart.nvars), n - 1):
        hs = [FormGenerator(h, J) for h in monomials_up_to(chart.nvars, k - (n - 1))]
        hs = invariant_filter(chart, hs)
        for gen in sorted(hs, key=lambda g: key(g.exps)):
            engine.insert(to_indices(exterior_derivative(chart, {gen.exps: 1}, J)))
        hqs = [
            g
            for g in (
                FormGenerator(h, J)
                for h in monomials_up_to(chart.nvars, k - (n - 1) - d)
            )
            if hq_ok(g)
        ]
        for gen in sorted(hqs, key=lambda g: key(g.exps)):
            shifted = {_add_exps(gen.exps, qe): qc for qe, qc in qterms.items()}
            engine.insert(to_indices(exterior_derivative(chart, shifted, J)))

    oracle = pair_hodge_numbers(n, d, spec.weights, spec.hyperplane_index)
    expected = sum(oracle)
    corank = len(columns) - len(engine.pivots)
    if corank != expected:
        raise LatticeRankError(
            "subspace corank %d disagrees with the Hodge oracle %d (vector %r)"
            % (corank, expected, oracle)
        )

    # image of the column lattice, not its saturation: the target is
    # torsion-free, so nothing may be divided out on this side
    quot = PLocalEchelon(p, saturate=False)
    for i in range(len(columns)):
        quot.insert(engine.reduce_span({i: 1}))
    rank = quot.rank
    if rank != expected:
        raise LatticeRankError(
            "lattice rank %d disagrees with the Hodge oracle %d (vector %r)"
            % (rank, expected, oracle)
        )

    # present the basis rows sorted by pivot column, pivot entry positive
    order = sorted(range(rank), key=lambda i: quot.pivots[i][0])
    basis = []
    for i in order:
        col, pentry, row = quot.pivots[i]
        sign = -1 if pentry < 0 else 1
        basis.append(
            tuple((columns[c], sign * v) for c, v in sorted(row.items()))
        )
    position = [0] * rank
    for pos, i in enumerate(order):
        position[i] = pos
    return LatticeBasis(
        p=p,
        n=n,
        d=d,
        k=k,
        rank=rank,
        torsion_bound=torsion_exponent(n, k, p),
        saturation_ledger=engine.ledger,
        hodge_vector=oracle,
        invariant=data is not None,
        columns=tuple(columns),
        basis=tuple(basis),
        chart=chart,
        engine=engine,
        quotient=quot,
        quotient_order=tuple(position),
        column_index=column_index,
    )


def invariant_lattice_basis(spec: PairSpec, k: int | None = None) -> LatticeBasis:
    """Invariant lattice of a weighted spec (general entry point; with
    trivial weights it coincides with ``lattice_basis``)."""
    return lattice_basis(spec, k)


def _form_to_vector(basis: LatticeBasis, form) -> dict:
    if isinstance(form, FormGenerator):
        return omega_coordinates(basis.chart, form)
    if isinstance(form, SparsePoly):
        return dict(form.terms)
    if isinstance(form, dict):
        return dict(form)
    raise TypeError("cannot interpret %r as a top form" % (form,))


def reduce_form(basis: LatticeBasis, form) -> ReducedForm:
    """Coordinates of a top form in the lattice basis.

    The form may be a w-model vector (SparsePoly or exponent dict), a
    w-model FormGenerator, or an ambient n-form generator. Values are
    exact; the torsion exponent is the least e with p^e * coordinates
    integral, and for integral input forms it is bounded by
    ``basis.torsion_bound``."""
    vec = _form_to_vector(basis, form)
    indexed = {}
    for exps, v in vec.items():
        if exps not in basis.column_index:
            raise ValueError(
                "form monomial %r outside the modeled columns (degree > %d, or "
                "not invariant)" % (exps, basis.k + basis.d - basis.n - 1)
            )
        if v:
            indexed[basis.column_index[exps]] = v
    residual = basis.engine.reduce_exact(indexed)
    raw, rest = basis.quotient.reduce_with_coefficients(residual)
    if any(rest.values()):
        raise AssertionError("reduction left support outside the lattice span")
    coords = [Fraction(0)] * basis.rank
    torsion = 0
    for i, c in enumerate(raw):
        # stored basis rows are sign-normalized; engine rows are not
        if basis.quotient.pivots[i][1] < 0:
            c = -c
        coords[basis.quotient_order[i]] = c
        # prime-to-p denominators are units in Z_(p); only the p-part
        # of the denominator witnesses torsion
        den = c.denominator
        e = 0
        while den % basis.p == 0:
            den //= basis.p
            e += 1
        torsion = max(torsion, e)
    return ReducedForm(tuple(coords), torsion)
