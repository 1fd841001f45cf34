"""Generalized hulls, Poisson normal-bundle processes, and zero cells."""

from .bodies import (
    Ball,
    BallIntersection,
    EMPTY,
    EmptySet,
    GEO_TOL,
    HalfBall,
    HalfSpace,
    PolyhedralCone,
    Polytope,
    WHOLE_SPACE,
    WholeSpace,
    body_from_json,
    body_to_json,
    convex_hull,
    cross_polytope,
    cube,
    minkowski_difference,
    normal_cone,
    polar,
    polar_cone,
    support_function,
    supporting_cone,
)
from .empirical import (
    ExperimentReport,
    directional_extent_empirical,
    dual_cone_intensity_experiment,
    inclusion_functional_estimate,
    ks_statistic,
    so2_square_experiment,
    translation_box_experiment,
    uniform_sample,
    xn_membership,
)
from .hulls import (
    BallHullOracle,
    FAMILY_PRESETS,
    HullFamily,
    HullResult,
    feasible_set,
    generic_hull_membership,
    hull_full_affine,
    hull_linear_ball,
    hull_translations_scalings,
    k_hull_translations,
    positive_hull,
    spherical_hull_halfball,
)
from .matexp import matrix_exponential, skew_dim, skew_matrix
from .poisson import (
    NormalBundleMark,
    PoissonSample,
    boundary_sampler,
    process_rate,
    sample_PK,
    spawn_rng,
)
from .zerocell import (
    CONE_PRESETS,
    ConeSpec,
    HalfSpaceSystem,
    TangentPoint,
    build_zero_cell,
    cone_preset,
    halfspace_from_mark,
    is_bounded,
    membership,
    polar_of_zero_cell,
    recession_cone_TK,
    reflect,
    reflected_recession_in_cone,
    restrict_to_cone,
    support_extent,
    transform_rotation_of_K,
    transform_translation_of_K,
)

__version__ = "0.1.0"
