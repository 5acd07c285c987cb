"""Exact-arithmetic toolkit for bounded-variation matrix domains.

Lazy infinite triangle matrices and sequences over exact rationals, the
Cesaro/weighted/Riesz mean constructions and their composed domain matrices,
Schauder-basis columns, alpha/beta/gamma dual testers, matrix-class
characterization transforms, and truncation-based membership diagnostics.
"""

__version__ = "0.1.0"

from .core import (
    DenseTrunc,
    InvalidWeightsError,
    Rational,
    Seq,
    SingularMatrixError,
    Triangle,
    apply,
    compose,
    identity,
    invert,
    rat,
    seq_eval,
    transform_seq,
    truncate,
)
from .builders import (
    Domain,
    RieszWeights,
    WeightPair,
    basis_column,
    cesaro,
    cesaro_domain,
    cesaro_inverse,
    delta,
    gamma,
    phi,
    riesz,
    riesz_domain,
    sigma_riesz,
    sigma_sum,
    weighted_domain,
    weighted_mean,
)
from .spaces import (
    MembershipReport,
    SpaceId,
    bvA_norm_prefix,
    bv_norm_prefix,
    classical_dual,
    domain_membership,
    membership,
)
from .duals import DualReport, alpha_assoc, beta_assoc, dual_test
from .matclass import (
    BandedMatrix,
    ClassReport,
    UnsupportedClassError,
    class_test_from_domain,
    class_test_into_domain,
    left_transform_F,
    row_transform_E,
)
