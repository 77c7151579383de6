"""Exact arithmetic for dimension groups presented by non-mixing Bratteli data."""

from .errors import (
    BadRepeat,
    BratteliError,
    EmptyLevel,
    LevelOutOfRange,
    NonAscending,
    NotInjective,
    NotNonMixing,
    NotNormalized,
    NotOrderUnit,
    NotPositive,
    ParseError,
    RankMismatch,
)
from .supernat import INF, ONE, SupernaturalNumber, is_prime
from .simplicial import (
    NonMixingMap,
    forall_n_leq,
    is_order_unit,
    is_positive,
)
from .diagram import (
    BratteliSequence,
    LimitElement,
    forall_n_leq_limit,
    injectivize,
    keep_at,
    limit_eq,
    limit_leq,
    telescope,
)
from .tensor import tensor_map, tensor_qn, tensor_seq, tensor_vec
from .intertwine import (
    DiagonalMap,
    LadderRung,
    UnitChangeCertificate,
    certificate_failures,
    rescale_lemma,
    unit_change,
    verify_certificate,
)
from .states import (
    DualMapMatrix,
    StateVector,
    depth_image_vertices,
    dual_map,
    in_convex_hull,
    restate_unit,
    simplex_vertices,
    verify_state_invariance,
)
from .equiv import (
    Cardinality,
    EquivalenceCertificate,
    Equivalent,
    EquivVerdict,
    IndexSystem,
    Intertwining,
    NotEquivalent,
    Unknown,
    canonicalize_q,
    equivalence_certificate_failures,
    equivalent_q,
    find_intertwining,
    limit_cardinality,
    limit_is_perfect,
    surjectivize,
    verify_equivalence_certificate,
)
from .fileformat import parse_diagram, serialize_diagram

__version__ = "0.1.0"

__all__ = [
    "BadRepeat",
    "BratteliError",
    "BratteliSequence",
    "Cardinality",
    "DiagonalMap",
    "DualMapMatrix",
    "EmptyLevel",
    "EquivalenceCertificate",
    "Equivalent",
    "EquivVerdict",
    "INF",
    "IndexSystem",
    "Intertwining",
    "LadderRung",
    "LevelOutOfRange",
    "LimitElement",
    "NonAscending",
    "NonMixingMap",
    "NotEquivalent",
    "NotInjective",
    "NotNonMixing",
    "NotNormalized",
    "NotOrderUnit",
    "NotPositive",
    "ONE",
    "ParseError",
    "RankMismatch",
    "StateVector",
    "SupernaturalNumber",
    "Unknown",
    "UnitChangeCertificate",
    "canonicalize_q",
    "certificate_failures",
    "depth_image_vertices",
    "dual_map",
    "equivalence_certificate_failures",
    "equivalent_q",
    "find_intertwining",
    "forall_n_leq",
    "forall_n_leq_limit",
    "in_convex_hull",
    "injectivize",
    "is_order_unit",
    "is_positive",
    "is_prime",
    "keep_at",
    "limit_cardinality",
    "limit_eq",
    "limit_is_perfect",
    "limit_leq",
    "parse_diagram",
    "rescale_lemma",
    "restate_unit",
    "serialize_diagram",
    "simplex_vertices",
    "surjectivize",
    "telescope",
    "tensor_map",
    "tensor_qn",
    "tensor_seq",
    "tensor_vec",
    "unit_change",
    "verify_certificate",
    "verify_equivalence_certificate",
    "verify_state_invariance",
]
