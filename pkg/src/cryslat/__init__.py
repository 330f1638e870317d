"""Exact p-local cohomology lattices for hypersurface pairs.

The package computes integral lattices in the middle rigid cohomology
of a smooth projective hypersurface relative to a smooth hyperplane
section, working p-locally with exact arithmetic throughout. Around
that core it provides the Hodge-number oracles, precision planning for
Frobenius computations, and zeta-function utilities needed to use the
lattices for point counting.
"""

__version__ = "0.1.0"

from .hodge import (
    HodgePolygon,
    full_middle_betti,
    hodge_polygon,
    invariant_primitive_hodge_numbers,
    pair_hodge_numbers,
    primitive_hodge_numbers,
)
from .rings import (
    CappedResidue,
    ExtField,
    LocalRational,
    PrimeField,
    is_prime,
    valuation,
)
from .logdr import (
    FormGenerator,
    LatticeBasis,
    LatticeRankError,
    ReducedForm,
    TwistBound,
    invariant_lattice_basis,
    lattice_basis,
    pole_bound_k,
    reduce_form,
)
from .precision import (
    HodgeBlockShape,
    LossReport,
    PrecisionPlan,
    coefficient_error_bound,
    coefficient_precisions,
    loss_harness,
    pair_root_blocks,
    required_frobenius_precision,
    torsion_exponent,
)
from .sparsepoly import SparsePoly
from .specfile import (
    ParseError,
    SpecDocument,
    format_pairspec,
    load_pairspec,
    parse_pairspec,
    save_pairspec,
)
from .variety import (
    AffineChart,
    PairSpec,
    ProbeReport,
    SpecError,
    dehomogenize,
    homogenize,
    hyperplane_section,
    smoothness_probe,
)
from .zeta import (
    BudgetError,
    CountConsistencyError,
    ZetaFunction,
    ZetaNumerator,
    assemble_zeta,
    check_newton_above_hodge,
    count_points,
    curve_zeta_numerator,
    functional_equation_sign,
    newton_polygon,
    points_charpoly_on_D,
    split_charpoly,
    twist_T,
    weil_bound_ok,
    zeta_point_counts,
)
