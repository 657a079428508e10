"""Hasse-Weil L-functions of elliptic curves over Q.

Exact per-prime local data (Tate's algorithm), Dirichlet coefficients,
numerical completed L-values with functional-equation control, BSD
consistency reports, and a desk-scale calculus for Hodge / Weil-Deligne
realization data.
"""

from .curves import CurvePoint, IsomorphismData, WeierstrassCurve, parse_curve
from .errors import (
    BadReduction,
    DependentGenerators,
    HasseWeilError,
    NotNilpotent,
    NotPrime,
    OutsideConvergenceRegion,
    PointNotOnCurve,
    PrecisionExhausted,
    SingularBasis,
    SingularCurve,
)
from .localdata import (
    LocalData,
    ReductionType,
    ap,
    conductor,
    count_points,
    reduction_type,
    tate_local,
)
from .lseries import (
    DirichletCoefficients,
    EulerFactor,
    dirichlet_coefficients,
    eval_dirichlet,
    eval_euler,
    local_euler_factor,
    trace_formula_check,
    weil_zeta_from_counts,
    zeta_factorization_check,
)
from .analytic import AnalyticContext, analytic_rank, l_derivative, l_value, lambda_value, root_number
from .bsd import BsdReport, bsd_report, real_period, regulator
from .heights import canonical_height, height_doubling_exact
from .intlinalg import lattice_index, smith_normal_form, torsion_order
from .realizations import (
    HodgeData,
    MonodromyFiltration,
    WeilDeligneRep,
    check_compatibility,
    check_purity,
    check_weight,
    frobenius_semisimplify,
    gamma_factor,
    monodromy_filtration,
    tate_twist_hodge,
    tate_twist_wd,
    wd_local_factor,
)

__version__ = "0.1.0"
