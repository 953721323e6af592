"""Lorentz quantum computer simulator.

Typed qubit/hybit registers with an indefinite inner product,
Lorentzian gates, unobservable-state measurement semantics, the
hyperbolic-amplification algorithm suite (maximum independent set,
majority-SAT, k-IS counting, postselection), and an independent
path-sum amplitude oracle.
"""

from .circuit import (
    Circuit,
    MeasurementBasis,
    MeasurementDirective,
    RunRecord,
    exact_outcome_probabilities,
    execute,
    make_rng,
    measure_partial,
    outcome_chain_probabilities,
    sample,
)
from .errors import (
    FormatError,
    LqcError,
    NoDominantSolutionError,
    PostselectionFailedError,
    UnobservableStateError,
)
from .gates import (
    CHI_CCV,
    CHI_CV,
    Gate,
    GateKind,
    apply,
    apply_all,
    ccv_decomposition,
    cv_decomposition,
    is_lorentzian,
    local_matrix,
    matrix_of,
)
from .oracles import (
    CnfFormula,
    Graph,
    Predicate,
    build_F,
    build_gz_expression,
    cnf_predicate,
    count_satisfying,
    g_z,
    independent_set_predicate,
    is_independent_set,
    k_is_predicate,
    less_than_predicate,
    oracle_gate,
    parse_dimacs_cnf,
    parse_dimacs_graph,
)
from .state import (
    LorentzState,
    ObservableDistribution,
    Wire,
    WireKind,
    WireLayout,
    WireRole,
)

__version__ = "0.1.0"
