"""Command-line pipeline driver with reproducible text reports.

Five subcommands: ``lattice-basis``, ``precision-plan``, ``zeta``,
``verify-examples``, ``loss-harness``. Every report embeds the input
description and the package version, carries no timestamps, and is
byte-identical across reruns of the same invocation.

Exit codes: 0 success, 1 a computation finished but violated a stated
expectation (rank mismatch, failed verification check, budget), 2 the
input could not be used (parse error, bad twist, bad flags).
"""

from __future__ import annotations

import argparse
import sys
from fractions import Fraction

from . import __version__
from .hodge import hodge_polygon, pair_hodge_numbers, primitive_hodge_numbers
from .logdr import (
    LatticeRankError,
    lattice_basis,
    pole_bound_k,
    reduce_form,
)
from .precision import (
    HodgeBlockShape,
    coefficient_precisions,
    loss_harness,
    pair_root_blocks,
    required_frobenius_precision,
    torsion_exponent,
)
from .specfile import ParseError, load_pairspec
from .variety import SpecError, smoothness_probe
from .zeta import (
    BudgetError,
    CountConsistencyError,
    check_newton_above_hodge,
    count_points,
    curve_zeta_numerator,
    functional_equation_sign,
    newton_polygon,
    weil_bound_ok,
    zeta_point_counts,
)

USAGE_EXIT = 2
MISMATCH_EXIT = 1


class _Failure(Exception):
    """Computation finished but an expectation did not hold."""


def _det_valuation(rows, p: int) -> int | None:
    """p-adic valuation of det(rows), None when singular."""
    nn = len(rows)
    m = [list(map(Fraction, r)) for r in rows]
    det = Fraction(1)
    for c in range(nn):
        piv = next((r for r in range(c, nn) if m[r][c] != 0), None)
        if piv is None:
            return None
        if piv != c:
            m[c], m[piv] = m[piv], m[c]
            det = -det
        det *= m[c][c]
        inv = 1 / m[c][c]
        for r in range(c + 1, nn):
            if m[r][c]:
                f = m[r][c] * inv
                m[r] = [x - f * y for x, y in zip(m[r], m[c])]
    num, den, v = abs(det.numerator), det.denominator, 0
    while num % p == 0:
        num //= p
        v += 1
    while den % p == 0:
        den //= p
        v -= 1
    return v


# ---------------------------------------------------------------------------
# report assembly


def _header(command: str, args) -> list:
    lines = ["cryslat %s report" % __version__, "command: %s" % command]
    for name in ("k", "q", "max_ext", "trials", "seed", "threads", "budget"):
        if hasattr(args, name) and getattr(args, name) is not None:
            lines.append("flag %s: %s" % (name.replace("_", "-"), getattr(args, name)))
    return lines


def _echo_spec(text: str) -> list:
    return ["spec:"] + ["|" + line for line in text.rstrip("\n").splitlines()]


def _emit(lines, out_path) -> None:
    body = "\n".join(lines) + "\n"
    if out_path:
        with open(out_path, "w", encoding="utf-8") as fh:
            fh.write(body)
    else:
        sys.stdout.write(body)


def _poly_lines(label: str, polygon) -> list:
    verts = " ".join(
        "(%s,%s)" % (v[0], v[1]) for v in polygon.vertices
    )
    return ["%s vertices: %s" % (label, verts)]


def _monomial_label(exps, names) -> str:
    parts = []
    for e, name in zip(exps, names):
        if e == 1:
            parts.append(name)
        elif e:
            parts.append("%s^%d" % (name, e))
    return "*".join(parts) if parts else "1"


def _chart_names(doc) -> tuple:
    names = [nm for i, nm in enumerate(doc.names) if i != doc.spec.hyperplane_index]
    if doc.spec.is_weighted:
        names = [nm.upper() for nm in names]
    return tuple(names)


def _spec_and_twist(args):
    try:
        doc = load_pairspec(args.spec)
    except OSError as exc:
        raise _Usage("cannot read %s: %s" % (args.spec, exc))
    except ParseError as exc:
        raise _Usage("%s: %s" % (args.spec, exc))
    spec = doc.spec
    bound = pole_bound_k(spec.n, spec.d)
    k = args.k if getattr(args, "k", None) is not None else doc.k
    if k is None:
        k = bound.minimal
    if not bound.admits(k):
        raise _Usage(
            "twist %d is below the minimal admissible twist %d for "
            "(dim, degree) = (%d, %d)" % (k, bound.minimal, spec.n, spec.d)
        )
    return doc, k


class _Usage(Exception):
    pass


# ---------------------------------------------------------------------------
# subcommands


def cmd_lattice_basis(args) -> int:
    doc, k = _spec_and_twist(args)
    spec = doc.spec
    lines = _header("lattice-basis", args)
    lines += _echo_spec(open(args.spec, encoding="utf-8").read())
    probe = smoothness_probe(spec, depth=1)
    lines.append("smoothness probe (depth 1): %s" % ("pass" if probe.passed else
                 "FAIL at %r over extension %d (advisory)"
                 % (probe.witness_point, probe.witness_extension)))
    lines.append("minimal twist: %d" % pole_bound_k(spec.n, spec.d).minimal)
    lines.append("chosen twist: %d" % k)
    basis = lattice_basis(spec, k)
    lines.append("hodge vector: %s" % (basis.hodge_vector,))
    lines.append("rank: %d" % basis.rank)
    lines.append("torsion exponent bound: %d" % basis.torsion_bound)
    lines.append("subspace saturation ledger: %d" % basis.saturation_ledger)
    names = _chart_names(doc)
    for i, row in enumerate(basis.basis):
        parts = ["%d*%s" % (c, _monomial_label(exps, names)) for exps, c in row]
        lines.append("basis %d: %s" % (i, " + ".join(parts)))
    _emit(lines, args.out)
    return 0


def cmd_precision_plan(args) -> int:
    doc, k = _spec_and_twist(args)
    spec = doc.spec
    q = args.q if args.q is not None else spec.p
    lines = _header("precision-plan", args)
    lines += _echo_spec(open(args.spec, encoding="utf-8").read())
    pair = pair_hodge_numbers(spec.n, spec.d, spec.weights, spec.hyperplane_index)
    polygon = hodge_polygon(pair)
    blocks = pair_root_blocks(spec.n, spec.d, spec.weights, spec.hyperplane_index)
    precisions = coefficient_precisions(blocks, q, spec.p)
    plan = required_frobenius_precision(precisions, polygon, spec.n, k, spec.p, q)
    lines.append("chosen twist: %d" % k)
    lines.append("pair hodge vector: %s" % (pair,))
    lines += _poly_lines("hodge polygon", polygon)
    lines.append("root blocks (count, weight): %s" % (blocks,))
    lines.append("coefficient targets N_i: %s" % (list(plan.targets),))
    lines.append("polygon floors G(i): %s" % (list(plan.gammas),))
    lines.append("torsion exponent: %d" % plan.torsion)
    lines.append("core precision: %d" % plan.core_precision)
    lines.append("hypothesis floor: %d%s" % (plan.hypothesis_floor,
                 " (binding)" if plan.clamped else ""))
    lines.append("frobenius precision N_F: %d" % plan.frobenius_precision)
    if plan.p_power_frobenius_only:
        lines.append("note: q = %d differs from p = %d; the plan bounds the "
                     "p-power Frobenius matrix only" % (q, spec.p))
    _emit(lines, args.out)
    return 0


def cmd_zeta(args) -> int:
    doc, _ = _spec_and_twist(args)
    spec = doc.spec
    M = args.max_ext if args.max_ext is not None else 1
    budget = args.budget if args.budget is not None else 2_000_000
    lines = _header("zeta", args)
    lines += _echo_spec(open(args.spec, encoding="utf-8").read())
    counts = []
    for m in range(1, M + 1):
        counts.append(count_points(spec, m, budget=budget))
        lines.append("count m=%d: %d" % (m, counts[-1]))
    failed = False
    if spec.n == 1 and not spec.is_weighted:
        g = sum(primitive_hodge_numbers(1, spec.d)) // 2
        lines.append("genus: %d" % g)
        if len(counts) >= g:
            numerator = curve_zeta_numerator(counts, spec.p, g)
            lines.append("zeta numerator: %s" % (list(numerator.coeffs),))
            sign = functional_equation_sign(numerator, g)
            if sign is None:
                lines.append("functional equation sign: FAIL (neither sign fits)")
                failed = True
            else:
                lines.append("functional equation sign: %+d" % sign)
            lines.append("weil bound: %s"
                         % ("pass" if weil_bound_ok(numerator, g) else "FAIL"))
            regenerated = zeta_point_counts(numerator, spec.n, spec.p, len(counts))
            ok = list(regenerated) == counts
            lines.append("count regeneration: %s" % ("pass" if ok else
                         "FAIL %s" % (regenerated,)))
            failed = failed or not ok
            np_ = newton_polygon(list(numerator.coeffs), spec.p)
            lines += _poly_lines("newton polygon", np_)
            hp = hodge_polygon(primitive_hodge_numbers(1, spec.d))
            lines += _poly_lines("hodge polygon", hp)
            above, witness = check_newton_above_hodge(np_, hp)
            lines.append("newton above hodge: %s" % ("pass" if above else
                         "FAIL at x=%s" % witness))
            failed = failed or not above
        else:
            lines.append("note: %d counts < genus %d; numerator skipped" % (len(counts), g))
    else:
        lines.append("note: numerator recovery is restricted to plain curves")
    _emit(lines, args.out)
    return MISMATCH_EXIT if failed else 0


def _verify_one(example, lines) -> int:
    failures = 0

    def check(label, ok, detail):
        nonlocal failures
        lines.append("check %s.%s: %s: %s" % (example.name, label, detail,
                     "pass" if ok else "FAIL"))
        failures += 0 if ok else 1

    spec = example.spec
    basis = lattice_basis(spec, example.k)
    check("rank", basis.rank == example.expected_rank,
          "computed %d, expected %d" % (basis.rank, example.expected_rank))
    rows, torsion = [], 0
    for form in example.basis_forms:
        reduced = reduce_form(basis, form)
        rows.append(reduced.coordinates)
        torsion = max(torsion, reduced.torsion_exponent)
    if rows:
        check("form-integrality", torsion == 0,
              "max torsion exponent %d" % torsion)
        val = _det_valuation(rows, spec.p)
        detail = "det valuation %s" % ("singular" if val is None else val)
        if example.unit_determinant:
            check("unit-determinant", val == 0, detail + ", expected 0")
        check("det-valuation-pin", val == example.det_valuation,
              detail + ", pinned %d" % example.det_valuation)
    for m, expected in enumerate(example.point_counts, start=1):
        got = count_points(spec, m)
        check("point-count-m%d" % m, got == expected,
              "computed %d, frozen %d" % (got, expected))
    return failures


def cmd_verify_examples(args) -> int:
    from .examples import worked_examples

    lines = _header("verify-examples", args)
    failures = 0
    for example in worked_examples():
        lines.append("example %s:" % example.name)
        failures += _verify_one(example, lines)
    lines.append("result: %s" % ("pass" if failures == 0 else
                 "FAIL (%d check%s failed)" % (failures, "" if failures == 1 else "s")))
    _emit(lines, args.out)
    return 0 if failures == 0 else MISMATCH_EXIT


def cmd_loss_harness(args) -> int:
    doc, k = _spec_and_twist(args)
    spec = doc.spec
    shape = HodgeBlockShape.from_pair(spec.n, spec.d, spec.weights,
                                      spec.hyperplane_index)
    q = args.q if args.q is not None else spec.p
    blocks = pair_root_blocks(spec.n, spec.d, spec.weights, spec.hyperplane_index)
    polygon = hodge_polygon(pair_hodge_numbers(spec.n, spec.d, spec.weights,
                                               spec.hyperplane_index))
    precisions = coefficient_precisions(blocks, q, spec.p)
    plan = required_frobenius_precision(precisions, polygon, spec.n, k, spec.p, q)
    N = max(plan.frobenius_precision, 2 * (shape.n + 1))
    trials = args.trials if args.trials is not None else 100
    seed = args.seed if args.seed is not None else 0
    report = loss_harness(shape, N, spec.p, trials, seed)
    lines = _header("loss-harness", args)
    lines += _echo_spec(open(args.spec, encoding="utf-8").read())
    lines.append("shape: x-blocks %s, section blocks %s" % (shape.x_widths, shape.d_widths))
    lines.append("matrix size: %d" % shape.size)
    lines.append("perturbation exponent N: %d" % N)
    lines.append("trials: %d  seed: %d" % (trials, seed))
    lines.append("violations: %d" % report.violations)
    slack = ["-" if s == float("inf") else str(s) for s in report.min_slack]
    lines.append("minimal slack per coefficient: %s" % " ".join(slack))
    if report.first_violation is not None:
        lines.append("first violation: trial %d coefficient %d" % report.first_violation)
    _emit(lines, args.out)
    return 0 if report.violations == 0 else MISMATCH_EXIT


# ---------------------------------------------------------------------------
# argument surface


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cryslat",
        description="exact p-local cohomology lattices for hypersurface pairs",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(sp, spec_required=True):
        if spec_required:
            sp.add_argument("--spec", required=True, help="pair description file")
        sp.add_argument("--threads", type=int, default=None,
                        help="worker budget hint (results are identical at any value)")
        sp.add_argument("--out", default=None, help="write the report to a file")

    sp = sub.add_parser("lattice-basis", help="compute the twist-k lattice basis")
    common(sp)
    sp.add_argument("--k", type=int, default=None, help="twist override")
    sp.set_defaults(func=cmd_lattice_basis)

    sp = sub.add_parser("precision-plan", help="Frobenius precision audit trail")
    common(sp)
    sp.add_argument("--k", type=int, default=None, help="twist override")
    sp.add_argument("--q", type=int, default=None, help="point-count field size")
    sp.set_defaults(func=cmd_precision_plan)

    sp = sub.add_parser("zeta", help="point counts and curve zeta numerator")
    common(sp)
    sp.add_argument("--max-ext", type=int, default=None, dest="max_ext",
                    help="count over F_{p^m} for m = 1..this")
    sp.add_argument("--budget", type=int, default=None,
                    help="enumeration budget (points scanned)")
    sp.set_defaults(func=cmd_zeta)

    sp = sub.add_parser("verify-examples",
                        help="re-derive the bundled worked examples and compare")
    common(sp, spec_required=False)
    sp.set_defaults(func=cmd_verify_examples)

    sp = sub.add_parser("loss-harness",
                        help="randomized check of the characteristic-polynomial loss bound")
    common(sp)
    sp.add_argument("--k", type=int, default=None, help="twist override")
    sp.add_argument("--q", type=int, default=None, help="point-count field size")
    sp.add_argument("--trials", type=int, default=None)
    sp.add_argument("--seed", type=int, default=None)
    sp.set_defaults(func=cmd_loss_harness)
    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except _Usage as exc:
        print("error: %s" % exc, file=sys.stderr)
        return USAGE_EXIT
    except (ParseError, SpecError) as exc:
        print("error: %s" % exc, file=sys.stderr)
        return USAGE_EXIT
    except (LatticeRankError, BudgetError, CountConsistencyError, _Failure) as exc:
        print("error: %s" % exc, file=sys.stderr)
        return MISMATCH_EXIT


if __name__ == "__main__":
    sys.exit(main())
