"""Sparse multivariate polynomials with exact integer coefficients.

A SparsePoly is a dict from exponent tuples to nonzero ints, plus the
number of variables and an optional per-variable weight vector. Weights
only affect degree bookkeeping (weighted degree sum(a_i * e_i)); the
term arithmetic is the usual one. Zero coefficients are never stored.

Instances are treated as immutable: every operation returns a fresh
polynomial, and term iteration is sorted so downstream output is
deterministic.
"""

from __future__ import annotations

from typing import Iterable, Mapping


class SparsePoly:
    __slots__ = ("terms", "nvars", "weights")

    def __init__(self, terms: Mapping[tuple, int] | Iterable, nvars: int, weights=None):
        if nvars < 0:
            raise ValueError("nvars must be nonnegative")
        if weights is not None:
            weights = tuple(weights)
            if len(weights) != nvars:
                raise ValueError("weight vector length disagrees with nvars")
            if any(w < 1 for w in weights):
                raise ValueError("weights must be positive")
        items = terms.items() if isinstance(terms, Mapping) else terms
        clean = {}
        for exps, coeff in items:
            exps = tuple(exps)
            if len(exps) != nvars:
                raise ValueError("exponent tuple %r does not have %d entries" % (exps, nvars))
            if any(e < 0 for e in exps):
                raise ValueError("negative exponent in %r" % (exps,))
            if not isinstance(coeff, int):
                raise TypeError("coefficients must be ints, got %r" % type(coeff))
            if coeff:
                clean[exps] = clean.get(exps, 0) + coeff
                if not clean[exps]:
                    del clean[exps]
        self.terms = clean
        self.nvars = nvars
        self.weights = weights

    # -- constructors ------------------------------------------------------

    @classmethod
    def zero(cls, nvars: int, weights=None) -> "SparsePoly":
        return cls({}, nvars, weights)

    @classmethod
    def constant(cls, c: int, nvars: int, weights=None) -> "SparsePoly":
        return cls({(0,) * nvars: c}, nvars, weights)

    @classmethod
    def monomial(cls, exps, coeff: int = 1, weights=None) -> "SparsePoly":
        exps = tuple(exps)
        return cls({exps: coeff}, len(exps), weights)

    # -- degree bookkeeping ------------------------------------------------

    def term_degree(self, exps: tuple) -> int:
        if self.weights is None:
            return sum(exps)
        return sum(a * e for a, e in zip(self.weights, exps))

    def degree(self) -> int:
        """Weighted total degree; -1 for the zero polynomial."""
        if not self.terms:
            return -1
        return max(self.term_degree(e) for e in self.terms)

    def is_homogeneous(self, d: int | None = None) -> bool:
        if not self.terms:
            return True
        degrees = {self.term_degree(e) for e in self.terms}
        if len(degrees) != 1:
            return False
        return d is None or degrees == {d}

    # -- arithmetic --------------------------------------------------------

    def _same_shape(self, other: "SparsePoly"):
        if other.nvars != self.nvars:
            raise ValueError("mixed variable counts %d and %d" % (self.nvars, other.nvars))

    def __add__(self, other):
        if isinstance(other, int):
            other = SparsePoly.constant(other, self.nvars, self.weights)
        if not isinstance(other, SparsePoly):
            return NotImplemented
        self._same_shape(other)
        out = dict(self.terms)
        for exps, c in other.terms.items():
            out[exps] = out.get(exps, 0) + c
        return SparsePoly(out, self.nvars, self.weights)

    __radd__ = __add__

    def __neg__(self):
        return SparsePoly({e: -c for e, c in self.terms.items()}, self.nvars, self.weights)

    def __sub__(self, other):
        if isinstance(other, int):
            other = SparsePoly.constant(other, self.nvars, self.weights)
        if not isinstance(other, SparsePoly):
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return -(self - other)

    def __mul__(self, other):
        if isinstance(other, int):
            return SparsePoly(
                {e: other * c for e, c in self.terms.items()}, self.nvars, self.weights
            )
        if not isinstance(other, SparsePoly):
            return NotImplemented
        self._same_shape(other)
        out = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                key = tuple(a + b for a, b in zip(e1, e2))
                out[key] = out.get(key, 0) + c1 * c2
        return SparsePoly(out, self.nvars, self.weights)

    __rmul__ = __mul__

    def __pow__(self, e: int):
        if e < 0:
            raise ValueError("negative power of a polynomial")
        result = SparsePoly.constant(1, self.nvars, self.weights)
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def map_coefficients(self, fn) -> "SparsePoly":
        out = {}
        for e, c in self.terms.items():
            c2 = fn(c)
            if c2:
                out[e] = c2
        return SparsePoly(out, self.nvars, self.weights)

    def reduce_mod(self, p: int) -> "SparsePoly":
        return SparsePoly(
            {e: c % p for e, c in self.terms.items()}, self.nvars, self.weights
        )

    # -- calculus and variable surgery --------------------------------------

    def derivative(self, i: int) -> "SparsePoly":
        out = {}
        for exps, c in self.terms.items():
            if exps[i]:
                key = exps[:i] + (exps[i] - 1,) + exps[i + 1 :]
                out[key] = out.get(key, 0) + c * exps[i]
        return SparsePoly(out, self.nvars, self.weights)

    def substitute_one(self, i: int) -> "SparsePoly":
        """Set variable i to 1 and drop it (dehomogenization step)."""
        out = {}
        for exps, c in self.terms.items():
            key = exps[:i] + exps[i + 1 :]
            out[key] = out.get(key, 0) + c
        weights = None
        if self.weights is not None:
            weights = self.weights[:i] + self.weights[i + 1 :]
        return SparsePoly(out, self.nvars - 1, weights)

    def substitute_zero(self, i: int) -> "SparsePoly":
        """Set variable i to 0 and drop it (hyperplane section step)."""
        out = {e[:i] + e[i + 1 :]: c for e, c in self.terms.items() if e[i] == 0}
        weights = None
        if self.weights is not None:
            weights = self.weights[:i] + self.weights[i + 1 :]
        return SparsePoly(out, self.nvars - 1, weights)

    def insert_variable(self, i: int, exponent_fn, weight: int | None = None) -> "SparsePoly":
        """Insert a variable at slot i, giving each term the exponent
        exponent_fn(term_exps). Used by homogenize."""
        out = {}
        for exps, c in self.terms.items():
            e_new = exponent_fn(exps)
            if e_new < 0:
                raise ValueError("term %r would need a negative exponent" % (exps,))
            key = exps[:i] + (e_new,) + exps[i:]
            out[key] = out.get(key, 0) + c
        weights = None
        if self.weights is not None:
            if weight is None:
                raise ValueError("weighted polynomial needs a weight for the new variable")
            weights = self.weights[:i] + (weight,) + self.weights[i:]
        return SparsePoly(out, self.nvars + 1, weights)

    def stretch_exponents(self, factors) -> "SparsePoly":
        """Substitute x_i -> x_i^{factors[i]}; weights divide out, which
        turns a weighted-homogeneous polynomial into a straight one."""
        factors = tuple(factors)
        out = {}
        for exps, c in self.terms.items():
            key = tuple(e * f for e, f in zip(exps, factors))
            out[key] = out.get(key, 0) + c
        return SparsePoly(out, self.nvars, None)

    def evaluate(self, values):
        """Evaluate at a point whose coordinates live in any ring with
        +, * and ** (field elements, ints, Fractions)."""
        if len(values) != self.nvars:
            raise ValueError("point has wrong dimension")
        total = None
        for exps, c in sorted(self.terms.items()):
            term = None
            for v, e in zip(values, exps):
                if e:
                    factor = v**e
                    term = factor if term is None else term * factor
            term = c if term is None else term * c
            total = term if total is None else total + term
        if total is None:
            return 0
        return total

    # -- plumbing ------------------------------------------------------------

    def sorted_terms(self):
        return sorted(self.terms.items())

    def __eq__(self, other):
        return (
            isinstance(other, SparsePoly)
            and other.nvars == self.nvars
            and other.weights == self.weights
            and other.terms == self.terms
        )

    def __hash__(self):
        return hash((self.nvars, self.weights, frozenset(self.terms.items())))

    def __bool__(self):
        return bool(self.terms)

    def __repr__(self):
        if not self.terms:
            return "SparsePoly(0, nvars=%d)" % self.nvars
        bits = []
        for exps, c in self.sorted_terms():
            mono = "*".join("x%d^%d" % (i, e) for i, e in enumerate(exps) if e)
            bits.append("%+d%s" % (c, "*" + mono if mono else ""))
        return "SparsePoly(%s)" % " ".join(bits)
