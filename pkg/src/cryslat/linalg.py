"""Exact linear algebra over Z_(p) and friends.

The lattice extraction pipeline needs three capabilities, all exact:

* ``echelonize_unit_pivot``: row echelon form over Z_(p) where every
  pivot is chosen with globally minimal p-valuation. Row operations
  only, so the row span over Z_(p) is preserved, and the pivot
  valuations reproduce the elementary divisor valuations a Smith-form
  computation would report.
* ``lattice_quotient_basis``: a Z_(p)-basis of span(ambient_gens)
  modulo the p-saturation of span(sub_gens), with explicit
  representative vectors.
* ``char_poly``: coefficients of det(1 - M*T) by the Berkowitz method,
  division-free so it runs over rings with non-invertible elements
  (capped residues, integers).

Internally, large sparse work goes through ``PLocalEchelon``, an online
echelon of integer row dicts. Inserted rows are reduced against the
pivots in insertion order; in saturating mode each row is divided by
its full integer content (the p-part of which is the saturation, and is
accumulated in a ledger), so every pivot is a p-adic unit. In
non-saturating mode only the prime-to-p content (a Z_(p)-unit) is ever
divided out, so the row span is preserved on the nose; a pivot is
replaced when an incoming row offers a smaller valuation in its column.
"""

from __future__ import annotations

import math
from fractions import Fraction

from .rings import INFINITY, LocalRational, _int_valuation, is_prime


def _as_fraction(x, p: int) -> Fraction:
    if isinstance(x, LocalRational):
        if x.p != p:
            raise ValueError("entry is %d-local, expected %d-local" % (x.p, p))
        return x.as_fraction()
    f = Fraction(x)
    if f.denominator % p == 0:
        raise ValueError("entry %s is not p-local at p=%d" % (f, p))
    return f


def _frac_valuation(f: Fraction, p: int):
    if not f:
        return INFINITY
    return _int_valuation(f.numerator, p) - _int_valuation(f.denominator, p)


# ---------------------------------------------------------------------------
# online sparse echelon over Z_(p)


class PLocalEchelon:
    """Online row echelon of integer vectors over Z_(p).

    Rows are sparse dicts {column: int}. Pivot rows are kept in
    insertion order and each is zero at every earlier pivot column, so
    one ordered pass reduces any vector against the whole echelon.
    """

    __slots__ = ("p", "saturate", "pivots", "ledger")

    def __init__(self, p: int, saturate: bool):
        if not is_prime(p):
            raise ValueError("%d is not prime" % p)
        self.p = p
        self.saturate = saturate
        self.pivots = []  # list of [col, pivot_entry, row_dict]
        self.ledger = 0  # total p-valuation divided out (saturating mode)

    @property
    def rank(self) -> int:
        return len(self.pivots)

    def pivot_columns(self):
        return [col for col, _, _ in self.pivots]

    def _strip(self, row: dict) -> dict:
        """Divide out content: full content when saturating, else only
        its prime-to-p part."""
        if not row:
            return row
        g = 0
        for v in row.values():
            g = math.gcd(g, v)
            if g == 1:
                break
        if self.saturate:
            if g > 1:
                vcap = _int_valuation(g, self.p)
                self.ledger += int(vcap)
                row = {c: v // g for c, v in row.items()}
            return row
        if g > 1:
            while g % self.p == 0:
                g //= self.p
            if g > 1:
                row = {c: v // g for c, v in row.items()}
        return row

    @staticmethod
    def _combine(pi: int, row: dict, a: int, trow: dict) -> dict:
        """pi*row - a*trow, dropping zeros."""
        if pi == 1:
            out = dict(row)
        else:
            out = {c: pi * v for c, v in row.items()}
        for c, v in trow.items():
            w = out.get(c, 0) - a * v
            if w:
                out[c] = w
            elif c in out:
                del out[c]
        return out

    def _unit_combine(self, pentry: int, row: dict, a: int, trow: dict) -> dict:
        """pentry*row - a*trow with the p-part of pentry divided out of
        both multipliers, so the coefficient of row is a p-unit and the
        span over Z_(p) gains exactly row's class. Requires
        v_p(a) >= v_p(pentry)."""
        v = _int_valuation(pentry, self.p)
        if v:
            pw = self.p ** int(v)
            pentry //= pw
            a //= pw
        return self._combine(pentry, row, a, trow)

    def _row_pivot(self, row: dict):
        """Leftmost entry of minimal valuation; (col, val)."""
        best_col, best_val = None, None
        for c in sorted(row):
            v = _int_valuation(row[c], self.p)
            if best_val is None or v < best_val:
                best_col, best_val = c, v
                if v == 0:
                    break
        return best_col, best_val

    def insert(self, row: dict):
        """Reduce row against the echelon and adopt what is left as a new
        pivot row. Returns the new pivot column, or None if the row was
        dependent."""
        row = self._strip({c: v for c, v in row.items() if v})
        i = 0
        while i < len(self.pivots):
            slot = self.pivots[i]
            col, pentry, prow = slot
            a = row.get(col)
            if a:
                if not self.saturate:
                    va = _int_valuation(a, self.p)
                    vp = _int_valuation(pentry, self.p)
                    if va < vp:
                        # incoming row offers a better pivot: swap, then
                        # keep reducing the old pivot row below.
                        slot[1], slot[2] = a, row
                        row = self._strip(self._unit_combine(a, prow, pentry, row))
                        i += 1
                        continue
                    row = self._strip(self._unit_combine(pentry, row, a, prow))
                    i += 1
                    continue
                row = self._strip(self._combine(pentry, row, a, prow))
            i += 1
        if not row:
            return None
        col, val = self._row_pivot(row)
        if self.saturate:
            assert val == 0, "saturating echelon lost its unit pivot"
        self.pivots.append([col, row[col], row])
        return col

    def reduce_exact(self, vec: dict) -> dict:
        """Reduce a Fraction vector against the echelon without touching
        it. Returns the residual, supported off the pivot columns."""
        out = {c: Fraction(v) for c, v in vec.items() if v}
        for col, pentry, prow in self.pivots:
            a = out.get(col)
            if a:
                coef = a / pentry
                for c, v in prow.items():
                    w = out.get(c, Fraction(0)) - coef * v
                    if w:
                        out[c] = w
                    elif c in out:
                        del out[c]
        return out

    def reduce_with_coefficients(self, vec: dict):
        """Like ``reduce_exact`` but also report, per pivot row in
        insertion order, the Fraction coefficient that was subtracted.
        Returns (coefficients, residual)."""
        out = {c: Fraction(v) for c, v in vec.items() if v}
        coeffs = []
        for col, pentry, prow in self.pivots:
            a = out.get(col)
            if not a:
                coeffs.append(Fraction(0))
                continue
            coef = a / pentry
            coeffs.append(coef)
            for c, v in prow.items():
                w = out.get(c, Fraction(0)) - coef * v
                if w:
                    out[c] = w
                elif c in out:
                    del out[c]
        return coeffs, out

    def _unit_strip(self, row: dict) -> dict:
        """Divide out the prime-to-p content: a Z_(p)-unit rescale."""
        if not row:
            return row
        g = 0
        for v in row.values():
            g = math.gcd(g, v)
            if g == 1:
                return row
        while g % self.p == 0:
            g //= self.p
        if g > 1:
            row = {c: v // g for c, v in row.items()}
        return row

    def reduce_span(self, row: dict) -> dict:
        """Reduce an integer vector against the echelon, allowing unit
        rescaling of the input. The result spans the same line mod the
        echelon as the input. Requires every pivot met along the way to
        have p-valuation <= the entry it clears (always true for a
        saturating echelon)."""
        row = {c: v for c, v in row.items() if v}
        for col, pentry, prow in self.pivots:
            a = row.get(col)
            if a:
                row = self._unit_strip(self._unit_combine(pentry, row, a, prow))
        return row


# ---------------------------------------------------------------------------
# public operations


def echelonize_unit_pivot(rows, p: int):
    """Echelonize a matrix over Z_(p) with minimal-valuation pivoting.

    Pivots are selected globally: among all remaining rows and all
    non-pivot columns, the entry of smallest p-valuation wins (ties go
    to the smallest column, then smallest row). Each pivot row is
    scaled by a unit so the pivot entry is exactly p^v, and other rows
    are cleared at the pivot column whenever the quotient stays in
    Z_(p). Only Z_(p)-invertible row operations are used.

    Returns (echelon_rows, pivot_columns, transform, ledger):
    echelon_rows are the nonzero rows sorted by pivot column,
    pivot_columns matches that order, transform is the full square row
    transform (rows beyond the rank map the input to zero), and ledger
    is the total p-valuation of the pivots. The pivot valuations equal
    the elementary divisor valuations of the input.
    """
    mat = [[_as_fraction(x, p) for x in row] for row in rows]
    nrows = len(mat)
    ncols = len(mat[0]) if nrows else 0
    if any(len(r) != ncols for r in mat):
        raise ValueError("ragged matrix")
    transform = [
        [Fraction(1 if i == j else 0) for j in range(nrows)] for i in range(nrows)
    ]
    remaining = list(range(nrows))
    taken_cols = set()
    order = []  # (col, row) in pivot discovery order
    while True:
        best = None  # (val, col, row)
        for r in remaining:
            for c in range(ncols):
                if c in taken_cols or not mat[r][c]:
                    continue
                v = _frac_valuation(mat[r][c], p)
                key = (v, c, r)
                if best is None or key < best:
                    best = key
        if best is None:
            break
        v, c, r = best
        unit = mat[r][c] / p**v
        mat[r] = [x / unit for x in mat[r]]
        transform[r] = [x / unit for x in transform[r]]
        pivot = mat[r][c]
        for r2 in range(nrows):
            if r2 == r or not mat[r2][c]:
                continue
            if _frac_valuation(mat[r2][c], p) < v:
                continue  # cannot clear without leaving Z_(p)
            coef = mat[r2][c] / pivot
            mat[r2] = [x - coef * y for x, y in zip(mat[r2], mat[r])]
            transform[r2] = [x - coef * y for x, y in zip(transform[r2], transform[r])]
        remaining.remove(r)
        taken_cols.add(c)
        order.append((c, r))
    order.sort()
    echelon = [mat[r] for _, r in order]
    pivot_cols = [c for c, _ in order]
    ledger = sum(_frac_valuation(mat[r][c], p) for c, r in order)
    # present the transform with pivot rows first, in pivot-column order
    row_order = [r for _, r in order] + [r for r in remaining]
    transform = [transform[r] for r in row_order]
    return echelon, pivot_cols, transform, int(ledger)


def _integerize(row, p: int):
    """Scale a p-local row by the (p-unit) lcm of its denominators."""
    fr = [_as_fraction(x, p) for x in row]
    lcm = 1
    for f in fr:
        lcm = lcm * f.denominator // math.gcd(lcm, f.denominator)
    return {i: int(f * lcm) for i, f in enumerate(fr) if f}


def lattice_quotient_basis(ambient_gens, sub_gens, p: int):
    """Z_(p)-basis of span(ambient_gens) / span(sub_gens), torsion-free.

    sub_gens are p-saturated before quotienting, so the result is a
    basis of the image of the ambient lattice in the ambient-tensor-Q
    space modulo the Q-span of sub_gens. Representatives are integer
    vectors supported off the saturated echelon's pivot columns, sorted
    by pivot column with positive leading entry.
    """
    ambient_gens = list(ambient_gens)
    sub_gens = list(sub_gens)
    widths = {len(r) for r in ambient_gens} | {len(r) for r in sub_gens}
    if len(widths) > 1:
        raise ValueError("generator vectors have mixed lengths")
    ncols = widths.pop() if widths else 0
    sat = PLocalEchelon(p, saturate=True)
    for row in sub_gens:
        sat.insert(_integerize(row, p))
    quot = PLocalEchelon(p, saturate=False)
    for row in ambient_gens:
        quot.insert(sat.reduce_span(_integerize(row, p)))
    rows = sorted(quot.pivots, key=lambda s: s[0])
    basis = []
    for col, pentry, row in rows:
        sign = -1 if pentry < 0 else 1
        dense = [0] * ncols
        for c, v in row.items():
            dense[c] = sign * v
        basis.append(dense)
    return basis


# ---------------------------------------------------------------------------
# division-free characteristic polynomial


def _cast_like(sample, value: int):
    if sample is None or isinstance(sample, int):
        return value
    one = sample ** 0
    return one * value


def char_poly(rows):
    """Coefficients (a_0, ..., a_m) of det(1 - M*T), Berkowitz method.

    Division-free, so it works over Z, capped residues, finite fields
    and Z_(p) alike. a_0 is always 1 and a_1 is -trace(M).
    """
    if hasattr(rows, "rows"):
        rows = rows.rows
    m = len(rows)
    if any(len(r) != m for r in rows):
        raise ValueError("characteristic polynomial needs a square matrix")
    sample = None
    for r in rows:
        for x in r:
            if not isinstance(x, int):
                sample = x
                break
        if sample is not None:
            break
    if m == 0:
        return [1]
    # vec holds det(lambda*I - M_k) coefficients, leading first; for the
    # reversed polynomial det(1 - M*T) that ordering is already a_0.. a_k.
    vec = [_cast_like(sample, 1), _cast_like(sample, -1) * rows[0][0]]
    for k in range(2, m + 1):
        row = rows[k - 1][: k - 1]
        col = [rows[i][k - 1] for i in range(k - 1)]
        corner = rows[k - 1][k - 1]
        # s[j] = R * A^(j-1) * C for the leading (k-1) block A
        s = []
        w = col
        for _ in range(k - 1):
            acc = None
            for rv, wv in zip(row, w):
                term = rv * wv
                acc = term if acc is None else acc + term
            s.append(acc)
            w = [
                _dot(rows[i][: k - 1], w) for i in range(k - 1)
            ]
        # first column of the Berkowitz Toeplitz matrix
        firstcol = [_cast_like(sample, 1), _cast_like(sample, -1) * corner] + [
            _cast_like(sample, -1) * sj for sj in s[: k - 1]
        ]
        new = []
        for i in range(k + 1):
            acc = None
            for j in range(min(i, len(vec) - 1), -1, -1):
                if i - j >= len(firstcol):
                    continue
                term = firstcol[i - j] * vec[j]
                acc = term if acc is None else acc + term
            new.append(acc if acc is not None else _cast_like(sample, 0))
        vec = new
    return vec


def _dot(xs, ys):
    acc = None
    for x, y in zip(xs, ys):
        term = x * y
        acc = term if acc is None else acc + term
    return acc


class ExactMatrix:
    """A small dense matrix over any exact ring with +, -, *.

    Entries are stored as a tuple of row tuples; operations return new
    matrices. Mixed int entries coerce through the ring elements'
    arithmetic."""

    __slots__ = ("rows",)

    def __init__(self, rows):
        rows = tuple(tuple(r) for r in rows)
        if rows and any(len(r) != len(rows[0]) for r in rows):
            raise ValueError("ragged matrix")
        self.rows = rows

    @classmethod
    def identity(cls, n: int, one=1, zero=0):
        return cls([[one if i == j else zero for j in range(n)] for i in range(n)])

    @property
    def shape(self):
        return (len(self.rows), len(self.rows[0]) if self.rows else 0)

    def __add__(self, other):
        if not isinstance(other, ExactMatrix):
            return NotImplemented
        if self.shape != other.shape:
            raise ValueError("shape mismatch")
        return ExactMatrix(
            [[a + b for a, b in zip(r1, r2)] for r1, r2 in zip(self.rows, other.rows)]
        )

    def __sub__(self, other):
        if not isinstance(other, ExactMatrix):
            return NotImplemented
        if self.shape != other.shape:
            raise ValueError("shape mismatch")
        return ExactMatrix(
            [[a - b for a, b in zip(r1, r2)] for r1, r2 in zip(self.rows, other.rows)]
        )

    def __mul__(self, other):
        if isinstance(other, ExactMatrix):
            n, k = self.shape
            k2, mm = other.shape
            if k != k2:
                raise ValueError("shape mismatch")
            cols = list(zip(*other.rows))
            return ExactMatrix(
                [[_dot(row, col) for col in cols] for row in self.rows]
            )
        return ExactMatrix([[x * other for x in row] for row in self.rows])

    def __rmul__(self, other):
        return ExactMatrix([[other * x for x in row] for row in self.rows])

    def transpose(self):
        return ExactMatrix(list(zip(*self.rows)))

    def trace(self):
        n, m = self.shape
        if n != m:
            raise ValueError("trace of a non-square matrix")
        return _dot([1] * n, [self.rows[i][i] for i in range(n)])

    def map_entries(self, fn):
        return ExactMatrix([[fn(x) for x in row] for row in self.rows])

    def char_poly(self):
        return char_poly(self.rows)

    def __eq__(self, other):
        return isinstance(other, ExactMatrix) and other.rows == self.rows

    def __hash__(self):
        return hash(self.rows)

    def __repr__(self):
        return "ExactMatrix(%r)" % (self.rows,)
