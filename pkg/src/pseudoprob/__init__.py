"""Pseudo-probability representations of quantum states on dichotomic
observables, with nonlocality and entanglement witnesses built on them.

The package is organized bottom-up: `linalg` (operator helpers),
`observables` (dichotomic observables and orthonormal frames),
`pseudoprojection` (symmetrized products and outcome schemes),
`propositions` (logical formulas compiled to operators), `states`
(two-qubit families and normal forms), `witnesses` (the five witness
operators and their scheme-sum identities), `regions` (correlation-space
polytopes), and `optimizer` (detector-geometry search).
"""

__version__ = "0.1.0"

from .errors import (
    BadFrames,
    BadGeometry,
    BadRank,
    BadWeights,
    DimensionMismatch,
    NotHermitian,
    NotOrthonormal,
    NotProjector,
    NotUnit,
    PseudoprobError,
    ResolutionTooFine,
    SubsystemMismatch,
    UnknownLabel,
    Unphysical,
    UnsupportedShape,
)
from .linalg import hermitian_eig, min_eigenvalue, partial_transpose
from .observables import (
    DichotomicObservable,
    ObservableFrame,
    bloch_vector_of,
    doublet_with_sum,
    make_frame,
    pauli_observable,
    projector,
    random_dichotomic,
    triplet_with_sum,
)
from .optimizer import (
    GeometrySearchConfig,
    OptimizeResult,
    brute_force_geometry,
    detected_anywhere_on_orbit,
    optimize_geometry,
    orbit_best,
    orbit_specs,
    svd_informed_spec,
)
from .propositions import (
    And,
    CompiledProposition,
    Literal,
    Not,
    ObservableContext,
    Or,
    classicality_check,
    compile_proposition,
    make_context,
    parse_proposition,
    pseudo_probability,
)
from .pseudoprojection import (
    PseudoProjection,
    Scheme,
    build_scheme,
    convex_pseudo_projection,
    marginalize,
    symmetric_pseudo_projection,
    unit_pseudo_projection,
)
from .regions import (
    PHYSICAL,
    UNDETECTED,
    PolytopeSpec,
    RegionClassification,
    classify,
    slice_scan,
    werner_thresholds,
)
from .states import (
    CorrelationPoint,
    DensityMatrix,
    SvdNormalForm,
    TwoQubitPauliForm,
    bell_diagonal,
    bloch_state,
    chsh_max,
    load_state,
    maximally_mixed,
    pauli_form,
    ppt_is_entangled,
    product_state,
    random_density,
    singlet,
    svd_normal_form,
    tetrahedron_slacks,
    werner_local,
)
from .witnesses import (
    BOUNDS,
    KINDS,
    WitnessReport,
    WitnessSpec,
    agreement_proposition,
    chsh_proposition,
    chsh_spec,
    chsh_spec_from_bloch,
    default_spec,
    evaluate,
    identity_residuals,
    two_term_value,
    w1_spec,
    w2_spec,
    w3_spec,
    w4_spec,
)

__all__ = [
    "__version__",
    "PseudoprobError", "NotHermitian", "DimensionMismatch", "NotProjector",
    "NotUnit", "NotOrthonormal", "BadRank", "BadWeights", "UnknownLabel",
    "UnsupportedShape", "SubsystemMismatch", "BadFrames", "BadGeometry",
    "Unphysical", "ResolutionTooFine",
    "hermitian_eig", "min_eigenvalue", "partial_transpose",
    "DichotomicObservable", "ObservableFrame", "bloch_vector_of",
    "doublet_with_sum", "make_frame", "pauli_observable", "projector",
    "random_dichotomic", "triplet_with_sum",
    "PseudoProjection", "Scheme", "build_scheme", "convex_pseudo_projection",
    "marginalize", "symmetric_pseudo_projection", "unit_pseudo_projection",
    "Literal", "And", "Or", "Not", "ObservableContext", "CompiledProposition",
    "classicality_check", "compile_proposition", "make_context",
    "parse_proposition", "pseudo_probability",
    "CorrelationPoint", "DensityMatrix", "SvdNormalForm", "TwoQubitPauliForm",
    "bell_diagonal", "bloch_state", "chsh_max", "load_state",
    "maximally_mixed", "pauli_form", "ppt_is_entangled", "product_state",
    "random_density", "singlet", "svd_normal_form", "tetrahedron_slacks",
    "werner_local",
    "KINDS", "BOUNDS", "WitnessSpec", "WitnessReport", "agreement_proposition",
    "chsh_proposition", "chsh_spec", "chsh_spec_from_bloch", "default_spec",
    "evaluate", "identity_residuals", "two_term_value",
    "w1_spec", "w2_spec", "w3_spec", "w4_spec",
    "PHYSICAL", "UNDETECTED", "PolytopeSpec", "RegionClassification",
    "classify", "slice_scan", "werner_thresholds",
    "GeometrySearchConfig", "OptimizeResult", "brute_force_geometry",
    "detected_anywhere_on_orbit", "optimize_geometry", "orbit_best",
    "orbit_specs", "svd_informed_spec",
]
