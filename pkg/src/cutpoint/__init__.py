"""cutpoint: exact models and decision procedures for unary automata.

Exact rational (and Gaussian rational) linear algebra, linear recurrence
automata and their vector/tree generalizations, weighted / probabilistic /
quantum finite automata, the conversion lattice between them, and deciders
for the Skolem, positivity, strict positivity and exclusivity emptiness
problems at rational cutpoints.
"""

from .linalg import (
    DimensionError,
    GaussianRational,
    Matrix,
    Vector,
    rational_sqrt,
)
from .validation import InvalidModelError, ValidationReport
from .sequences import (
    ForeignSymbolError,
    LinRec,
    Lra,
    Lrva,
    TreeLinRec,
    VectorLinRec,
    lr_combine,
    lr_constant,
    lr_eval,
    lr_minimize,
    lr_reduce,
    lr_split_constant,
    lra_eval,
    lrva_eval,
    mod_k_lra,
    plrva_validate,
    tlr_eval,
    vlr_eval,
)
from .automata import (
    END_MARKER,
    Classification,
    Gfa,
    Pfa,
    Qfa,
    Relation,
    ThresholdQuery,
    classify,
    gfa_eval,
    is_bistochastic,
    pfa_eval,
    qfa_eval,
    validate,
    value_of,
)
from .conversions import (
    ConversionCertificate,
    gfa_to_linrec,
    gfa_to_lrva,
    gfa_to_pfa,
    linrec_companion_gfa,
    linrec_to_gfa,
    lrva_depth1_gfa,
    lrva_to_gfa,
    pfa_to_gfa,
    qfa_to_gfa,
    rationalize_to_integer,
    shift_cutpoint,
    verify_certificate,
)
from .depth2 import Depth2Result, Quad, SearchCapExceeded, depth2_emptiness
from .decision import (
    Answer,
    CertificateKind,
    OrbitPeriodicity,
    Problem,
    ProblemKind,
    Status,
    Verdict,
    bounded_search,
    decide,
    decide_depth2,
    decide_exclusivity,
    decide_pfa_boundary,
    decide_query,
    detect_periodic_orbit,
    orbit_decide,
    verify_verdict,
)

__version__ = "0.1.0"

__all__ = [
    "Answer",
    "CertificateKind",
    "Classification",
    "ConversionCertificate",
    "Depth2Result",
    "DimensionError",
    "END_MARKER",
    "ForeignSymbolError",
    "GaussianRational",
    "Gfa",
    "InvalidModelError",
    "LinRec",
    "Lra",
    "Lrva",
    "Matrix",
    "OrbitPeriodicity",
    "Pfa",
    "Problem",
    "ProblemKind",
    "Qfa",
    "Quad",
    "Relation",
    "SearchCapExceeded",
    "Status",
    "ThresholdQuery",
    "TreeLinRec",
    "ValidationReport",
    "Vector",
    "VectorLinRec",
    "Verdict",
    "bounded_search",
    "classify",
    "decide",
    "decide_depth2",
    "decide_exclusivity",
    "decide_pfa_boundary",
    "decide_query",
    "depth2_emptiness",
    "detect_periodic_orbit",
    "gfa_eval",
    "gfa_to_linrec",
    "gfa_to_lrva",
    "gfa_to_pfa",
    "is_bistochastic",
    "linrec_companion_gfa",
    "linrec_to_gfa",
    "lr_combine",
    "lr_constant",
    "lr_eval",
    "lr_minimize",
    "lr_reduce",
    "lr_split_constant",
    "lra_eval",
    "lrva_depth1_gfa",
    "lrva_eval",
    "lrva_to_gfa",
    "mod_k_lra",
    "orbit_decide",
    "pfa_eval",
    "pfa_to_gfa",
    "plrva_validate",
    "qfa_eval",
    "qfa_to_gfa",
    "rational_sqrt",
    "rationalize_to_integer",
    "shift_cutpoint",
    "tlr_eval",
    "validate",
    "value_of",
    "verify_certificate",
    "verify_verdict",
    "vlr_eval",
]
