"""
Desk-scale simulator for entanglement verification over quantum memories.

Exact pure-state simulation of small qubit registers backs three
verification protocols run between a Verifier and an Other Party whose
node may be compromised: a measure-and-compare protocol (na2010) and two
teleportation-based alternatives (ac1, ac2). The package also provides
teleportation and entanglement swapping primitives, raw-key sifting with
QBER estimation, and seeded Monte Carlo experiment drivers with CSV
output. See the README for the command-line interface.
"""
from __future__ import annotations

from .adversary import (
    AttackerPolicy,
    BASIS_COMPUTATIONAL,
    BASIS_DIAGONAL,
    BASIS_HAAR_PER_PAIR,
    CompromiseEvent,
    HONEST_PROTOCOL,
    RANDOM_BITS,
    attacker_classical_reply,
    compromise_node,
    haar_basis,
)
from .experiments import (
    DEFAULT_SEED,
    DetectionEstimate,
    Histogram,
    MeanCheck,
    REFERENCE_MEANS,
    SAMPLING_SCHEMES,
    SCHEME_COMPONENT,
    SCHEME_HAAR,
    SCHEME_REAL_ANGLE,
    comparison_csv,
    comparison_table,
    detection_csv,
    empirical_mean_check,
    fp_histogram,
    histogram_csv,
    mc_detection,
    run_session,
    sample_amplitude_pairs,
    wilson_interval,
)
from .keys import QberEstimate, RawKey, bits_to_hex, estimate_qber, sift_raw_key
from .netmem import (
    ClassicalMessage,
    EntangledPairRecord,
    LifecycleError,
    Network,
    Transcript,
    build_network,
    consume_pair,
    distribute_pair,
    pair_id_bits,
    parse_topology,
    register_pair,
    send_classical,
)
from .qsim import (
    BellVariant,
    COMPUTATIONAL,
    DIAGONAL,
    MAX_QUBITS,
    RandomSource,
    SingleQubitBasis,
    apply_cnot,
    apply_gate,
    bell_measure,
    bell_state,
    branch_probabilities,
    fidelity,
    measure_computational,
    measure_in_basis,
    product,
    zero_state,
)
from .teleport import (
    CorrectionOp,
    TeleportOutcome,
    apply_correction,
    correction_operator,
    extract_qubits,
    swap_chain,
    swap_via_neighbor,
    teleport_state,
)
from .verify import (
    AC1,
    AC2,
    NA2010,
    PROTOCOLS,
    ResourceLedger,
    RoundResult,
    RoundTranscript,
    SessionResult,
    ac1_decision_round,
    ac1_detection_prob,
    ac1_round,
    ac2_decision_probs,
    ac2_decision_round,
    ac2_detection_prob,
    ac2_joint_state,
    ac2_round,
    closed_form_pm,
    decide_ac2,
    decide_na2010,
    na2010_round,
    run_verification,
)

__version__ = "0.1.0"

__all__ = [
    "__version__",
    # qsim
    "BellVariant",
    "SingleQubitBasis",
    "RandomSource",
    "COMPUTATIONAL",
    "DIAGONAL",
    "MAX_QUBITS",
    "zero_state",
    "bell_state",
    "product",
    "apply_gate",
    "apply_cnot",
    "branch_probabilities",
    "measure_computational",
    "measure_in_basis",
    "bell_measure",
    "fidelity",
    # netmem
    "Network",
    "EntangledPairRecord",
    "ClassicalMessage",
    "Transcript",
    "LifecycleError",
    "build_network",
    "parse_topology",
    "distribute_pair",
    "register_pair",
    "send_classical",
    "consume_pair",
    "pair_id_bits",
    # teleport
    "CorrectionOp",
    "TeleportOutcome",
    "correction_operator",
    "apply_correction",
    "extract_qubits",
    "teleport_state",
    "swap_via_neighbor",
    "swap_chain",
    # adversary
    "AttackerPolicy",
    "CompromiseEvent",
    "BASIS_COMPUTATIONAL",
    "BASIS_DIAGONAL",
    "BASIS_HAAR_PER_PAIR",
    "HONEST_PROTOCOL",
    "RANDOM_BITS",
    "haar_basis",
    "compromise_node",
    "attacker_classical_reply",
    # verify
    "NA2010",
    "AC1",
    "AC2",
    "PROTOCOLS",
    "ResourceLedger",
    "RoundTranscript",
    "RoundResult",
    "SessionResult",
    "na2010_round",
    "ac1_round",
    "ac2_round",
    "run_verification",
    "decide_na2010",
    "decide_ac2",
    "closed_form_pm",
    "ac1_detection_prob",
    "ac2_detection_prob",
    "ac2_joint_state",
    "ac1_decision_round",
    "ac2_decision_round",
    "ac2_decision_probs",
    # keys
    "RawKey",
    "QberEstimate",
    "sift_raw_key",
    "estimate_qber",
    "bits_to_hex",
    # experiments
    "DEFAULT_SEED",
    "DetectionEstimate",
    "Histogram",
    "MeanCheck",
    "REFERENCE_MEANS",
    "SAMPLING_SCHEMES",
    "SCHEME_HAAR",
    "SCHEME_REAL_ANGLE",
    "SCHEME_COMPONENT",
    "wilson_interval",
    "run_session",
    "sample_amplitude_pairs",
    "mc_detection",
    "fp_histogram",
    "comparison_table",
    "empirical_mean_check",
    "detection_csv",
    "histogram_csv",
    "comparison_csv",
]
