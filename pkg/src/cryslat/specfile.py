"""Plain-text descriptions of hypersurface pairs.

The format is line-based so that files diff cleanly and round-trip
exactly:

    pairspec v1
    prime 11
    dim 2
    degree 18
    vars x y t z
    weights 6 9 1 1
    hyperplane z
    twist 53
    term 1   0 2 0 0
    term -1  3 0 0 0

``vars``, ``weights`` and ``twist`` are optional; every other key is
required. A ``term`` line carries the integer coefficient followed by
one exponent per variable. ``hyperplane`` accepts a variable name or a
0-based index. ``#`` starts a comment; blank lines are skipped.

``format_pairspec`` emits a canonical serialization (terms sorted by
total degree, then lexicographically), and parsing what it wrote
returns an equal document.
"""

from __future__ import annotations

from dataclasses import dataclass

from .sparsepoly import SparsePoly
from .variety import PairSpec

MAGIC = "pairspec v1"


class ParseError(ValueError):
    """A pair description that cannot be read; carries the line number."""

    def __init__(self, lineno: int, message: str):
        super().__init__("line %d: %s" % (lineno, message))
        self.lineno = lineno


@dataclass(frozen=True)
class SpecDocument:
    """A parsed pair description: the validated spec, the optional
    chosen twist, and the variable names used for display."""

    spec: PairSpec
    k: int | None
    names: tuple

    @property
    def nvars(self) -> int:
        return self.spec.n + 2


def default_names(nvars: int) -> tuple:
    if nvars <= 4:
        return tuple("xyzw"[:nvars]) if nvars < 4 else ("x", "y", "z", "w")
    return tuple("x%d" % i for i in range(nvars))


def _int(tok: str, lineno: int, what: str) -> int:
    try:
        return int(tok)
    except ValueError:
        raise ParseError(lineno, "%s must be an integer, got %r" % (what, tok))


def parse_pairspec(text: str) -> SpecDocument:
    lines = text.splitlines()
    seen = {}
    terms = []
    magic_ok = False
    for lineno, raw in enumerate(lines, start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if not magic_ok:
            if line != MAGIC:
                raise ParseError(lineno, "expected %r header" % MAGIC)
            magic_ok = True
            continue
        key, *rest = line.split()
        if key == "term":
            terms.append((lineno, rest))
        elif key in ("prime", "dim", "degree", "vars", "weights", "hyperplane", "twist"):
            if key in seen:
                raise ParseError(lineno, "duplicate %r line" % key)
            seen[key] = (lineno, rest)
        else:
            raise ParseError(lineno, "unknown key %r" % key)
    if not magic_ok:
        raise ParseError(len(lines) + 1, "empty input, expected %r header" % MAGIC)
    for key in ("prime", "dim", "degree", "hyperplane"):
        if key not in seen:
            raise ParseError(len(lines) + 1, "missing %r line" % key)
    if not terms:
        raise ParseError(len(lines) + 1, "no term lines")

    def one(key, what):
        lineno, rest = seen[key]
        if len(rest) != 1:
            raise ParseError(lineno, "%s takes exactly one value" % key)
        return _int(rest[0], lineno, what), lineno

    p, _ = one("prime", "prime")
    n, _ = one("dim", "dim")
    d, _ = one("degree", "degree")
    nvars = n + 2

    if "vars" in seen:
        lineno, rest = seen["vars"]
        if len(rest) != nvars:
            raise ParseError(lineno, "expected %d variable names, got %d" % (nvars, len(rest)))
        if len(set(rest)) != nvars:
            raise ParseError(lineno, "variable names repeat")
        names = tuple(rest)
    else:
        names = default_names(nvars)

    weights = None
    if "weights" in seen:
        lineno, rest = seen["weights"]
        if len(rest) != nvars:
            raise ParseError(lineno, "expected %d weights, got %d" % (nvars, len(rest)))
        weights = tuple(_int(t, lineno, "weight") for t in rest)

    lineno, rest = seen["hyperplane"]
    if len(rest) != 1:
        raise ParseError(lineno, "hyperplane takes exactly one value")
    tok = rest[0]
    if tok in names:
        hyperplane = names.index(tok)
    else:
        hyperplane = _int(tok, lineno, "hyperplane")
        if not 0 <= hyperplane < nvars:
            raise ParseError(lineno, "hyperplane index %d out of range" % hyperplane)

    k = None
    if "twist" in seen:
        k, _ = one("twist", "twist")

    poly = {}
    for lineno, rest in terms:
        if len(rest) != 1 + nvars:
            raise ParseError(
                lineno, "term takes a coefficient and %d exponents, got %d values"
                % (nvars, len(rest))
            )
        coeff = _int(rest[0], lineno, "coefficient")
        exps = tuple(_int(t, lineno, "exponent") for t in rest[1:])
        if any(e < 0 for e in exps):
            raise ParseError(lineno, "negative exponent")
        if exps in poly:
            raise ParseError(lineno, "monomial %r appears twice" % (exps,))
        if coeff:
            poly[exps] = coeff
    if not poly:
        raise ParseError(len(lines) + 1, "all terms have zero coefficient")

    try:
        spec = PairSpec(p, n, d, SparsePoly(poly, nvars, weights), hyperplane,
                        weights=weights)
    except ValueError as exc:
        raise ParseError(len(lines) + 1, str(exc))
    return SpecDocument(spec=spec, k=k, names=names)


def format_pairspec(doc: SpecDocument) -> str:
    spec = doc.spec
    out = [MAGIC]
    out.append("prime %d" % spec.p)
    out.append("dim %d" % spec.n)
    out.append("degree %d" % spec.d)
    out.append("vars %s" % " ".join(doc.names))
    if spec.weights is not None:
        out.append("weights %s" % " ".join(str(w) for w in spec.weights))
    out.append("hyperplane %s" % doc.names[spec.hyperplane_index])
    if doc.k is not None:
        out.append("twist %d" % doc.k)
    for exps in sorted(spec.poly.terms, key=lambda e: (sum(e), e)):
        out.append("term %d %s" % (spec.poly.terms[exps], " ".join(str(e) for e in exps)))
    return "\n".join(out) + "\n"


def load_pairspec(path) -> SpecDocument:
    with open(path, "r", encoding="utf-8") as fh:
        return parse_pairspec(fh.read())


def save_pairspec(path, doc: SpecDocument) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(format_pairspec(doc))
