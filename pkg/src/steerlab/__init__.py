"""Certification toolkit for the two-setting 2-vs-1 steering trace gap.

The package builds N-qubit states and two-setting projective protocols,
computes Bob's conditional states, and decides whether any local-hidden-state
model could reproduce them: the quantum side of the ledger sums to 2 while a
pure-conditional, duplicate-free protocol forces any putative model to sum
to 1.  An independent linear-programming oracle cross-checks the structural
verdict, and a Bell-like construction produces paradox families of maximal
local-model rank on demand.
"""

from .config import Tolerances, max_dim
from .errors import (
    DegenerateInputError,
    DimensionError,
    ParseError,
    PreconditionError,
    SolverLimitError,
    SteerlabError,
    UnsupportedSettingError,
    ValidationError,
)
from .states import (
    BoundaryThetaWarning,
    DensityMatrix,
    EnsembleState,
    basis_ket,
    canonical_ensemble,
    density_of,
    lc4_mixed,
    lc4_states,
    load_state,
    random_mixed,
    random_pure,
    save_state,
    two_qubit_theta_state,
)
from .measurements import (
    BellLikeBasis,
    MeasurementSetting,
    SteeringProtocol,
    bell_like_setting,
    completeness_check,
    computational_family,
    load_measurement,
    load_protocol,
    pauli_axis_basis,
    random_rank1_setting,
    save_measurement,
    save_protocol,
    settings_equal,
    tensor_protocol,
    tensor_setting,
    transformation_matrix,
)
from .steering import (
    NO_PARADOX_CROSS_DUPLICATE,
    NO_PARADOX_PURITY,
    PARADOX,
    CollapseDecomposition,
    ConditionalStateSet,
    DuplicateCheck,
    ParadoxReport,
    PurityCheck,
    RankBoundResult,
    bob_marginal,
    certify,
    collapse_decomposition,
    conditional_states,
    measurement_requirement,
    purity_requirement,
    rank_bound_check,
)
from .lhs_lp import (
    FeasibilityResult,
    LhsModel,
    LpProblem,
    build_lp,
    candidate_ensemble,
    fallback_candidates,
    problem_for,
    solve_feasibility,
    verify_model,
)
from .belllike import (
    TwoTermExtraction,
    TwoTermForm,
    add_shared_slot_component,
    max_rank_family,
    no_shared_component_check,
    two_term_extract,
)

__version__ = "0.1.0"

__all__ = [
    "Tolerances",
    "max_dim",
    "SteerlabError",
    "DimensionError",
    "ValidationError",
    "DegenerateInputError",
    "UnsupportedSettingError",
    "PreconditionError",
    "ParseError",
    "SolverLimitError",
    "BoundaryThetaWarning",
    "EnsembleState",
    "DensityMatrix",
    "basis_ket",
    "two_qubit_theta_state",
    "lc4_states",
    "lc4_mixed",
    "density_of",
    "canonical_ensemble",
    "random_pure",
    "random_mixed",
    "load_state",
    "save_state",
    "BellLikeBasis",
    "MeasurementSetting",
    "SteeringProtocol",
    "pauli_axis_basis",
    "computational_family",
    "tensor_setting",
    "bell_like_setting",
    "tensor_protocol",
    "completeness_check",
    "transformation_matrix",
    "settings_equal",
    "random_rank1_setting",
    "load_measurement",
    "save_measurement",
    "load_protocol",
    "save_protocol",
    "PARADOX",
    "NO_PARADOX_PURITY",
    "NO_PARADOX_CROSS_DUPLICATE",
    "ConditionalStateSet",
    "CollapseDecomposition",
    "PurityCheck",
    "DuplicateCheck",
    "RankBoundResult",
    "ParadoxReport",
    "bob_marginal",
    "conditional_states",
    "collapse_decomposition",
    "purity_requirement",
    "measurement_requirement",
    "rank_bound_check",
    "certify",
    "LhsModel",
    "LpProblem",
    "FeasibilityResult",
    "candidate_ensemble",
    "fallback_candidates",
    "build_lp",
    "problem_for",
    "solve_feasibility",
    "verify_model",
    "TwoTermForm",
    "TwoTermExtraction",
    "two_term_extract",
    "no_shared_component_check",
    "max_rank_family",
    "add_shared_slot_component",
]
