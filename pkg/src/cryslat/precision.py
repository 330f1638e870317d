"""Precision planning for p-adic characteristic-polynomial recovery.

To pin down the integer coefficients a_i of det(1 - F T) from a
p-adically approximate Frobenius matrix, three quantities interact:

  * archimedean bounds B_i on |a_i| coming from the root moduli
    (each root of weight w has absolute value q^{w/2}), giving the
    residue precision N_i with p^{N_i} > 2 B_i that determines a_i;
  * the pair's Hodge polygon heights, which prepay part of the
    precision coefficientwise: computing F mod p^N yields a_i mod
    p^{N + G(i) - tau};
  * the torsion exponent tau = n * floor(log_p(k+1)) of the lattice,
    which taxes that guarantee.

The required Frobenius precision is N_F = max_i(N_i - G(i)) + tau,
never below the theorem's hypothesis floor n + tau + 1. All arithmetic
is exact: B_i live in Z[sqrt(q)] and comparisons square out the root.

``loss_harness`` stress-tests the linear-algebra inequality behind
these bounds on synthetic Hodge-adapted matrices: sample A with the
block valuation pattern, perturb by p^N E, and compare exact integer
characteristic polynomials.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction

from .hodge import (
    HodgePolygon,
    HodgePolygon as _Polygon,
    invariant_primitive_hodge_numbers,
    primitive_hodge_numbers,
)
from .linalg import ExactMatrix, char_poly
from .rings import INFINITY


def torsion_exponent(n: int, k: int, p: int) -> int:
    """n * floor(log_p(k+1)): the p-power bounding lattice torsion at
    twist k."""
    if n < 0 or k < 0 or p < 2:
        raise ValueError("need n >= 0, k >= 0, p >= 2")
    t = 0
    power = p
    while power <= k + 1:
        t += 1
        power *= p
    return n * t


# ---------------------------------------------------------------------------
# coefficient precisions from root bounds


def _sqrt_mul(a, b, q):
    """(x + y sqrt(q)) product on (x, y) pairs."""
    return (a[0] * b[0] + a[1] * b[1] * q, a[0] * b[1] + a[1] * b[0])


def coefficient_bounds(rank_weight_pairs, q: int) -> list:
    """B_i = elementary symmetric sums of the root-modulus multiset
    {q^{w/2}}, exactly, as (x, y) meaning x + y*sqrt(q).

    rank_weight_pairs lists (count, weight); a root of weight w has
    modulus q^{w/2}. Index i runs 0..total count."""
    coeffs = [(1, 0)]
    for count, w in rank_weight_pairs:
        if count < 0 or w < 0:
            raise ValueError("counts and weights must be nonnegative")
        root = (q ** (w // 2), 0) if w % 2 == 0 else (0, q ** ((w - 1) // 2))
        for _ in range(count):
            nxt = [(0, 0)] * (len(coeffs) + 1)
            for i, c in enumerate(coeffs):
                nxt[i] = (nxt[i][0] + c[0], nxt[i][1] + c[1])
                prod = _sqrt_mul(c, root, q)
                nxt[i + 1] = (nxt[i + 1][0] + prod[0], nxt[i + 1][1] + prod[1])
            coeffs = nxt
    return coeffs


def _exceeds_twice(pn: int, bound, q: int) -> bool:
    """Exact test p^N > 2 (x + y sqrt(q)) for nonnegative x, y."""
    x, y = bound
    lhs = pn - 2 * x
    if lhs <= 0:
        return False
    if y == 0:
        return True
    return lhs * lhs > 4 * y * y * q


def coefficient_precisions(rank_weight_pairs, q: int, p: int) -> list:
    """Minimal N_i with p^{N_i} > 2 B_i for every coefficient index.

    For the pair in dimension n the weight multiset is rank
    h^n_prim(hypersurface) at weight n plus rank h^{n-1}_prim(section)
    at weight n+1 (the section contributes Tate-twisted)."""
    bounds = coefficient_bounds(rank_weight_pairs, q)
    out = []
    for b in bounds:
        N = 0
        pn = 1
        while not _exceeds_twice(pn, b, q):
            N += 1
            pn *= p
        out.append(N)
    return out


def pair_root_blocks(
    n: int, d: int, weights: tuple | None = None, hyperplane_index: int | None = None
) -> tuple:
    """((rank_X, n), (rank_D, n+1)) for a pair, from the Hodge oracle."""
    if weights is None or all(a == 1 for a in weights):
        rx = sum(primitive_hodge_numbers(n, d))
        rd = sum(primitive_hodge_numbers(n - 1, d)) if n >= 1 else 0
    else:
        if hyperplane_index is None:
            raise ValueError("weighted root blocks need the hyperplane index")
        rx = sum(invariant_primitive_hodge_numbers(n, d, tuple(weights)))
        sw = tuple(weights[:hyperplane_index] + weights[hyperplane_index + 1 :])
        rd = sum(invariant_primitive_hodge_numbers(n - 1, d, sw)) if n >= 1 else 0
    return ((rx, n), (rd, n + 1))


# ---------------------------------------------------------------------------
# the plan


@dataclass(frozen=True)
class PrecisionPlan:
    """Everything needed to audit a Frobenius-precision claim."""

    p: int
    q: int
    n: int
    k: int
    torsion: int
    targets: tuple  # N_i
    gammas: tuple  # floor of the polygon height at each integer i
    polygon: HodgePolygon
    frobenius_precision: int  # N_F, after any floor clamp
    core_precision: int  # max_i(N_i - G(i)) + torsion, before the clamp
    clamped: bool
    hypothesis_floor: int

    @property
    def p_power_frobenius_only(self) -> bool:
        """True when q > p: the bounds are proved for the p-power
        Frobenius, not the q-power one, so the plan applies to the
        sigma-twisted assembly only."""
        return self.q != self.p

    def coefficient_error_bound(self, i: int, N: int | None = None) -> int:
        if N is None:
            N = self.frobenius_precision
        return coefficient_error_bound(N, self.polygon, i, self.n, self.k, self.p)


def _floored_heights(polygon: HodgePolygon) -> tuple:
    m = polygon.width
    if m != int(m):
        raise ValueError("polygon width must be an integer coefficient count")
    out = []
    for i in range(int(m) + 1):
        h = polygon.height(i)
        out.append(h.numerator // h.denominator)
    return tuple(out)


def required_frobenius_precision(
    Ns, polygon: HodgePolygon, n: int, k: int, p: int, q: int | None = None
) -> PrecisionPlan:
    """Assemble the plan: N_F = max_i(N_i - floor(G(i))) + torsion,
    raised to the hypothesis floor n + torsion + 1 when the formula
    lands below it (recorded in the plan)."""
    Ns = tuple(int(x) for x in Ns)
    gammas = _floored_heights(polygon)
    if len(Ns) != len(gammas):
        raise ValueError(
            "got %d coefficient targets for polygon span %d" % (len(Ns), len(gammas) - 1)
        )
    tau = torsion_exponent(n, k, p)
    core = max(N - g for N, g in zip(Ns, gammas)) + tau
    floor_value = n + tau + 1
    clamped = core < floor_value
    return PrecisionPlan(
        p=p,
        q=p if q is None else q,
        n=n,
        k=k,
        torsion=tau,
        targets=Ns,
        gammas=gammas,
        polygon=polygon,
        frobenius_precision=max(core, floor_value),
        core_precision=core,
        clamped=clamped,
        hypothesis_floor=floor_value,
    )


def coefficient_error_bound(N: int, polygon: HodgePolygon, i: int, n: int, k: int, p: int) -> int:
    """Guaranteed valuation of a_i - approx(a_i) when the Frobenius
    matrix is correct mod p^N: N + floor(G(i)) - torsion."""
    tau = torsion_exponent(n, k, p)
    if N < n + tau + 1:
        raise ValueError(
            "N = %d is below the hypothesis floor %d" % (N, n + tau + 1)
        )
    h = polygon.height(i)
    return N + h.numerator // h.denominator - tau


# ---------------------------------------------------------------------------
# the loss harness


@dataclass(frozen=True)
class HodgeBlockShape:
    """Column-block widths of a Hodge-adapted basis: hypersurface blocks
    (h^{n,0}, ..., h^{0,n}) and section blocks (h^{n-1,0}, ..., h^{0,n-1}).
    Block j of the first family carries valuation n-j, of the second
    n-j as well (so the section valuations run n..1)."""

    x_widths: tuple
    d_widths: tuple

    def __post_init__(self):
        if len(self.x_widths) < 1:
            raise ValueError("need at least one hypersurface block")
        if len(self.d_widths) != len(self.x_widths) - 1:
            raise ValueError("section blocks must number one less than hypersurface blocks")
        if any(w < 0 for w in self.x_widths) or any(w < 0 for w in self.d_widths):
            raise ValueError("widths must be nonnegative")
        if sum(self.x_widths) + sum(self.d_widths) < 1:
            raise ValueError("empty shape")

    @property
    def n(self) -> int:
        return len(self.x_widths) - 1

    @property
    def size(self) -> int:
        return sum(self.x_widths) + sum(self.d_widths)

    @classmethod
    def from_pair(
        cls, n: int, d: int, weights: tuple | None = None, hyperplane_index: int | None = None
    ) -> "HodgeBlockShape":
        if weights is None or all(a == 1 for a in weights):
            xw = primitive_hodge_numbers(n, d)
            dw = primitive_hodge_numbers(n - 1, d) if n >= 1 else ()
        else:
            if hyperplane_index is None:
                raise ValueError("weighted shapes need the hyperplane index")
            xw = invariant_primitive_hodge_numbers(n, d, tuple(weights))
            sw = tuple(weights[:hyperplane_index] + weights[hyperplane_index + 1 :])
            dw = invariant_primitive_hodge_numbers(n - 1, d, sw) if n >= 1 else ()
        return cls(tuple(xw), tuple(dw))

    def polygon(self) -> HodgePolygon:
        """The pair polygon: slope s has width x_widths[n-s] plus, for
        s >= 1, d_widths[n-s]."""
        n = self.n
        pairs = []
        for s in range(n + 1):
            w = self.x_widths[n - s]
            if s >= 1:
                w += self.d_widths[n - s]
            pairs.append((s, w))
        return _Polygon.from_slope_widths(pairs)

    def column_valuations(self) -> tuple:
        n = self.n
        vals = []
        for j, w in enumerate(self.x_widths):
            vals.extend([n - j] * w)
        for j, w in enumerate(self.d_widths):
            vals.extend([n - j] * w)
        return tuple(vals)


@dataclass(frozen=True)
class LossReport:
    shape: HodgeBlockShape
    N: int
    p: int
    trials: int
    seed: int
    violations: int
    first_violation: tuple | None  # (trial, coefficient index)
    min_slack: tuple  # per coefficient; may contain +inf where always exact


def _sample_entry(rng: random.Random, p: int, floor_val: int, headroom: int = 3) -> int:
    """Integer with ord_p >= floor_val, hitting the floor exactly with
    probability 1/2 (boundary stress)."""
    scale = p**headroom
    if rng.randrange(2):
        u = rng.randrange(1, scale)
        while u % p == 0:
            u = rng.randrange(1, scale)
        mag = p**floor_val * u
    else:
        mag = p ** (floor_val + 1) * rng.randrange(scale)
    return -mag if rng.randrange(2) else mag


def loss_harness(
    shape: HodgeBlockShape, N: int, p: int, trials: int, seed: int
) -> LossReport:
    """Empirical check of the coefficientwise loss bound on synthetic
    Hodge-adapted matrices.

    Per trial: sample A with the shape's valuation pattern (top band
    column valuations, exact-zero lower-left band, section valuations
    lower-right), sample an arbitrary integer perturbation E, and
    compare the exact characteristic polynomials of A and A + p^N E:
    every coefficient must satisfy ord_p(a_l - approx) >= N + G(l).

    Trials are independent (the per-trial stream is seeded by
    (seed, trial index)), so any execution order merges to the same
    report."""
    n = shape.n
    if N < 2 * (n + 1):
        raise ValueError("N = %d is below the lemma hypothesis 2(n+1) = %d" % (N, 2 * (n + 1)))
    if trials < 1:
        raise ValueError("need at least one trial")
    m = shape.size
    top = sum(shape.x_widths)
    col_vals = shape.column_valuations()
    polygon = shape.polygon()
    gammas = [int(polygon.height(i)) for i in range(m + 1)]

    violations = 0
    first = None
    min_slack = [INFINITY] * (m + 1)
    pN = p**N
    for t in range(trials):
        rng = random.Random(seed * 1_000_003 + t)
        A = []
        for r in range(m):
            row = []
            for c in range(m):
                if r < top:
                    row.append(_sample_entry(rng, p, col_vals[c] if c < top else 0))
                elif c < top:
                    row.append(0)  # exact-zero band
                else:
                    row.append(_sample_entry(rng, p, col_vals[c]))
            A.append(row)
        E = [[rng.randrange(-(p**3) + 1, p**3) for _ in range(m)] for _ in range(m)]
        At = [[A[r][c] + pN * E[r][c] for c in range(m)] for r in range(m)]
        ca = char_poly(A)
        cb = char_poly(At)
        for l in range(m + 1):
            diff = ca[l] - cb[l]
            if diff == 0:
                continue
            v = 0
            while diff % p == 0:
                diff //= p
                v += 1
            slack = v - (N + gammas[l])
            if slack < min_slack[l]:
                min_slack[l] = slack
            if slack < 0:
                violations += 1
                if first is None:
                    first = (t, l)
    return LossReport(
        shape=shape,
        N=N,
        p=p,
        trials=trials,
        seed=seed,
        violations=violations,
        first_violation=first,
        min_slack=tuple(min_slack),
    )


def sigma_twisted_power(A: ExactMatrix, sigma, a: int) -> ExactMatrix:
    """A * sigma(A) * sigma^2(A) * ... * sigma^{a-1}(A), with sigma
    applied entrywise."""
    if a < 1:
        raise ValueError("the twisted power needs a >= 1")
    if not isinstance(A, ExactMatrix):
        A = ExactMatrix(A)
    acc = A
    cur = A
    for _ in range(a - 1):
        cur = cur.map_entries(sigma)
        acc = acc * cur
    return acc
