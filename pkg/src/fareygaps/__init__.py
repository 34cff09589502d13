"""Gap statistics of Farey fractions with a constrained numerator or denominator."""

from .analytic import A, A_K, Ftilde_cdf, G_ell, K_d, Ktilde, PiecewiseCurve, ZetaRational, constant_C
from .bcz import (
    CylinderWord,
    HyperbolicRegion,
    InclusionResult,
    TrianglePoint,
    apply_T,
    apply_T_inverse,
    check_inclusion,
    cylinder_polygon,
    kappa,
    omega_area,
    word_polygon,
)
from .constrained import C_d_curve, Fd_cdf, enumerate_words, residue_sets
from .empirical import EmpiricalCDF, PairCount, gap_cdf, ks_distance, pair_count_k, threshold_count
from .farey import ContractViolation, FareyFilter, FareyFraction, count, enumerate_farey, next_fraction, nu_ell, nu_index
from .geometry import RationalPolygon
from .runs import RunRecord, certify_L, continuant, max_run, verify_identity_32

__version__ = "0.1.0"
