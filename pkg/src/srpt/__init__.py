"""Entanglement detection via partially transposed uncertainty relations."""

from .hilbert import (
    DensityMatrix,
    HilbertSpace,
    Observable,
    PAULI_X,
    PAULI_Y,
    PAULI_Z,
    StateVector,
    annihilation,
    anticommutator,
    basis_index,
    commutator,
    density_from_json,
    density_from_pure,
    density_to_json,
    expectation,
    hermitian_eigensystem,
    ket,
    min_eigenvalue,
    mix,
    number_operator,
    observable_from_json,
    observable_to_json,
    partial_transpose,
    partial_transpose_matrix,
    state_from_json,
    state_to_json,
    tensor,
    variance,
)
from .criteria import (
    ADMISSIBILITY_TOL,
    VIOLATION_TOL,
    AdmissibilityError,
    AdmissibilityReport,
    DuanReport,
    UncertaintyReport,
    duan_criterion,
    is_admissible,
    ppt_min_eigenvalue,
    sr_uncertainty,
    srpt_evaluate,
)
from .states import (
    OscillatorEigenstate,
    acin_state,
    cat_state,
    eigenstate_table_csv,
    ghz,
    multiphoton_state,
    oscillator2d_eigenstates,
    oscillator3d_eigenstates,
    random_pure,
    random_separable,
    schmidt_state,
    werner,
)
from .witnesses import (
    NotRepresentable,
    Prop2Params,
    cat_quadratures,
    multiphoton_pair,
    oscillator2d_pair,
    oscillator3d_pair,
    prop1_pair,
    prop2_check,
    prop2_observable,
    prop3_triple,
    werner_bipartite_pair,
    werner_multipartite_pair,
)
from .search import (
    NoCrossingError,
    SearchResult,
    ThresholdResult,
    WernerFormulaAudit,
    maximize_violation,
    ppt_threshold_scan,
    schmidt_aligned_prop1,
    threshold_scan,
    werner_phi_threshold,
)

__version__ = "0.1.0"
