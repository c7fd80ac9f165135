"""Detecting beyond-quantum states in two-party entanglement structures."""
from .cones import (
    BlockPositivityReport,
    StateClass,
    classify_state,
    depolarize,
    is_block_positive,
    is_ppt,
    is_psd,
    is_separable_2x2,
    phi_plus,
    random_beyond_quantum_pure,
    random_sep_star_states,
    rho_max,
)
from .di_simulation import (
    PositiveMap,
    Povm,
    SimulationResult,
    apply_adjoint,
    build_simulation,
    choi_map_from_state,
    normalize_state,
    pauli_povms,
    random_povm,
    range_projector,
)
from .linalg import (
    PAULIS,
    SchmidtTerm,
    eig_herm,
    operator_schmidt,
    partial_trace,
    partial_transpose,
    random_pure_state,
    random_unitary,
    su2_from_angles,
    tensor,
)
from .pauli import (
    PAULI_SUM,
    PauliScanResult,
    a_pauli,
    a_pauli_prime,
    correlation_matrix,
    max_a_pauli,
    so3_from_su2,
    su2_from_so3,
)
from .protocol import (
    Observable,
    ProtocolReport,
    detection_power,
    joint_distribution,
    pauli_terms,
    run_protocol,
    spectral_observable,
)
from .witness import Witness, build_witness, sup_quantum, verify_witness, witness_value

__version__ = "0.1.0"
