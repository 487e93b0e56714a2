"""cnflab: a desk-scale laboratory for learning CNF formulas from uniform
random solutions.

Everything here is exact and deterministic: solution spaces are enumerated
as bitmaps, probabilities are rationals, and every randomized routine takes
an explicit seed.  The package pairs a clause-elimination learner with the
brute-force oracles needed to verify its behavior on small instances.
"""

from .core import (
    Clause,
    ClauseState,
    CnfError,
    CnfFormula,
    EnumerationLimitError,
    InfeasiblePinningError,
    KdsParams,
    ParseError,
    SATISFIED,
    SamplingBudgetError,
    SolutionCapError,
    UNDETERMINED,
    UnsatisfiableError,
    VERSION,
    VIOLATED,
    assignment_from_bools,
    assignment_to_bools,
    clause_satisfied,
    clause_status,
    kds_parameters,
    parse_dimacs,
    simplify,
    write_dimacs,
)
from .generators import (
    GadgetSpec,
    HardFamilySpec,
    RandomCnfSpec,
    gen_counterexample,
    gen_disjoint_family,
    gen_gadget,
    gen_hard_family,
    gen_linear_cnf,
    gen_random_cnf,
)
from .learner import (
    PatternTable,
    SweepResult,
    SweepRow,
    TrialRecord,
    exact_learning_trial,
    extend_short_clauses,
    predicted_sample_bound,
    sample_complexity_sweep,
    valiant_learn,
)
from .rand import ALGORITHM, SeededRng, derived_seed
from .resilience import (
    LocalUniformityReport,
    PinSequenceResult,
    ResilienceReport,
    check_local_uniformity,
    find_pin_sequence,
    intersection_bound_t1,
    large_intersection_clauses,
    resilience_theta,
)
from .reveal import (
    ClauseClassification,
    EliminationResult,
    NiceEstimate,
    NiceReport,
    RevealParams,
    RevealResult,
    alive_variables,
    associated_component,
    classify_clauses,
    estimate_nice_probability,
    is_nice,
    iterative_elimination,
    reveal,
    wilson_interval,
)
from .solutions import (
    GadgetCountReport,
    SolutionSet,
    Space,
    conditional_prob,
    correlation_dC,
    count_solutions,
    enumerate_solutions,
    equivalent,
    forbidden_pattern_prob,
    marginals,
    sample_uniform,
    tv_distance,
    verify_gadget_counts,
)
from .structure import (
    BadSets,
    ModifiedBadSets,
    PropertyCheck,
    asymptotic_parameters,
    bad_fraction_in_component,
    check_clause_sizes,
    check_degree_one_property,
    check_edge_expansion,
    check_pairwise_intersection,
    count_connected_sets,
    dependency_components,
    identify_bad,
    modified_bad_sets,
    replay_bad_trace,
)

__version__ = VERSION

__all__ = [
    "ALGORITHM",
    "BadSets",
    "Clause",
    "ClauseClassification",
    "ClauseState",
    "CnfError",
    "CnfFormula",
    "EliminationResult",
    "EnumerationLimitError",
    "GadgetCountReport",
    "GadgetSpec",
    "HardFamilySpec",
    "InfeasiblePinningError",
    "KdsParams",
    "LocalUniformityReport",
    "ModifiedBadSets",
    "NiceEstimate",
    "NiceReport",
    "ParseError",
    "PatternTable",
    "PinSequenceResult",
    "PropertyCheck",
    "RandomCnfSpec",
    "ResilienceReport",
    "RevealParams",
    "RevealResult",
    "SATISFIED",
    "SamplingBudgetError",
    "SeededRng",
    "SolutionCapError",
    "SolutionSet",
    "Space",
    "SweepResult",
    "SweepRow",
    "TrialRecord",
    "UNDETERMINED",
    "UnsatisfiableError",
    "VERSION",
    "VIOLATED",
    "alive_variables",
    "assignment_from_bools",
    "assignment_to_bools",
    "associated_component",
    "asymptotic_parameters",
    "bad_fraction_in_component",
    "check_clause_sizes",
    "check_degree_one_property",
    "check_edge_expansion",
    "check_local_uniformity",
    "check_pairwise_intersection",
    "classify_clauses",
    "clause_satisfied",
    "clause_status",
    "conditional_prob",
    "correlation_dC",
    "count_connected_sets",
    "count_solutions",
    "dependency_components",
    "derived_seed",
    "enumerate_solutions",
    "equivalent",
    "estimate_nice_probability",
    "exact_learning_trial",
    "extend_short_clauses",
    "find_pin_sequence",
    "forbidden_pattern_prob",
    "gen_counterexample",
    "gen_disjoint_family",
    "gen_gadget",
    "gen_hard_family",
    "gen_linear_cnf",
    "gen_random_cnf",
    "identify_bad",
    "intersection_bound_t1",
    "is_nice",
    "iterative_elimination",
    "kds_parameters",
    "large_intersection_clauses",
    "marginals",
    "modified_bad_sets",
    "parse_dimacs",
    "predicted_sample_bound",
    "replay_bad_trace",
    "resilience_theta",
    "reveal",
    "sample_complexity_sweep",
    "sample_uniform",
    "simplify",
    "tv_distance",
    "valiant_learn",
    "verify_gadget_counts",
    "wilson_interval",
    "write_dimacs",
]
