"""smalg: exact linear algebra on structural matrix algebras.

A structural matrix algebra is the span of the matrix units E_ij whose
positions (i, j) run over a reflexive transitive relation on {1..n}. This
package computes with such algebras over the Gaussian rationals, exactly:
relation combinatorics, transitive weight maps and their triviality
certificates, intrinsic diagonalization of commuting families, Jordan
embedding classification and synthesis, and rank preserver decision
procedures with verifiable witnesses.
"""

from .diag import (
    is_diagonalizable,
    simultaneous_diagonalize_in_sma,
    spectral_idempotents,
)
from .errors import (
    DimensionMismatch,
    FormatError,
    GIsTrivial,
    InternalInconsistency,
    IrrationalSpectrum,
    NotClassUnion,
    NotClosed,
    NotDiagonalizable,
    NotEquivalent,
    NotJordan,
    NotTransitive,
    NotUnital,
    PreconditionViolated,
    RankNotOne,
    Singular,
    SmalgError,
    SupportViolation,
    VanishingUnitImage,
    ZeroWeight,
)
from .exactnum import (
    DenseMatrix,
    GaussianRational,
    format_matrix,
    inverse,
    parse_matrix,
    rank,
    scalar,
)
from .jordan import (
    CanonicalJordanForm,
    LinearMapOnSMA,
    algebra_embeds_into,
    all_algebra_automorphisms_inner,
    apply,
    classify_into_codomain,
    classify_jordan,
    conjugation_map,
    extends_to_full_jordan_automorphism,
    format_linear_map,
    identity_map,
    is_jordan_homomorphism,
    jordan_embeds_into,
    multiplicativity_dichotomy,
    parse_linear_map,
    synthesize_jordan,
    transpose_map,
)
from .quasiorder import (
    QuasiOrder,
    approx_classes,
    block_triangular_form,
    central_idempotents,
    format_relation,
    from_edges,
    increasing_permutations,
    parse_relation,
    rectangles,
    reverse,
    rho_U,
    two_sided_classes,
)
from .rankpres import (
    PreserverVerdict,
    bounded_rank_preserver_check,
    certify_rank_one_preserver,
    chain_of_alternating_pairs,
    classify_rank_preserver,
    format_verdict,
    induced_linear_map,
    nontrivial_g_rank_witness,
    rank_identity_check,
    sample_rank_one_in_sma,
)
from .transmap import (
    TransitiveMap,
    all_transitive_trivial,
    apply_induced,
    format_weights,
    parse_weights,
    random_transitive_map,
    rectangle_minor_condition,
    triviality_witness,
    validate,
)

__all__ = [
    "CanonicalJordanForm",
    "DenseMatrix",
    "DimensionMismatch",
    "FormatError",
    "GIsTrivial",
    "GaussianRational",
    "InternalInconsistency",
    "IrrationalSpectrum",
    "LinearMapOnSMA",
    "NotClassUnion",
    "NotClosed",
    "NotDiagonalizable",
    "NotEquivalent",
    "NotJordan",
    "NotTransitive",
    "NotUnital",
    "PreconditionViolated",
    "PreserverVerdict",
    "QuasiOrder",
    "RankNotOne",
    "Singular",
    "SmalgError",
    "SupportViolation",
    "TransitiveMap",
    "VanishingUnitImage",
    "ZeroWeight",
    "algebra_embeds_into",
    "all_algebra_automorphisms_inner",
    "all_transitive_trivial",
    "apply",
    "apply_induced",
    "approx_classes",
    "block_triangular_form",
    "bounded_rank_preserver_check",
    "central_idempotents",
    "certify_rank_one_preserver",
    "chain_of_alternating_pairs",
    "classify_into_codomain",
    "classify_jordan",
    "classify_rank_preserver",
    "conjugation_map",
    "extends_to_full_jordan_automorphism",
    "format_linear_map",
    "format_matrix",
    "format_relation",
    "format_verdict",
    "format_weights",
    "from_edges",
    "identity_map",
    "increasing_permutations",
    "induced_linear_map",
    "inverse",
    "is_diagonalizable",
    "is_jordan_homomorphism",
    "jordan_embeds_into",
    "multiplicativity_dichotomy",
    "nontrivial_g_rank_witness",
    "parse_linear_map",
    "parse_matrix",
    "parse_relation",
    "parse_weights",
    "random_transitive_map",
    "rank",
    "rank_identity_check",
    "rectangle_minor_condition",
    "rectangles",
    "reverse",
    "rho_U",
    "sample_rank_one_in_sma",
    "scalar",
    "simultaneous_diagonalize_in_sma",
    "spectral_idempotents",
    "synthesize_jordan",
    "transpose_map",
    "triviality_witness",
    "two_sided_classes",
    "validate",
]
