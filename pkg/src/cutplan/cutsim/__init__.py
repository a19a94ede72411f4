"""Monte-Carlo cutting simulator: exact statevector oracle, quasiprobability
decompositions, the shot-budgeted estimator and the variance experiment."""

from .decomp import (DecompositionSpec, Term, TermSide, cx_decomposition,
                     cz_decomposition, gate_cut_decomposition,
                     reconstruct_channel, reconstruction_error,
                     rzz_decomposition, target_channel, wire_cut_decomposition)
from .estimator import (EstimatorRun, GateCut, IncompatibleObservableError,
                        NotDisconnectedError, ShotAllocation, WireCut,
                        allocate_shots, combine_means, cut_estimate, cut_specs,
                        plan_partitions, variant_distribution)
from .experiment import (ExperimentConfig, ExperimentSummary, ring_circuit,
                         ring_cuts, variance_experiment)
from .observable import (ObsFactor, ProductObservable, expectation_value,
                         pauli_z_observable, value_table)
from .statevector import (MAX_QUBITS, TooManyQubitsError, apply_gate,
                          basis_bits, gate_matrix, simulate_statevector,
                          zero_state)

__all__ = [
    "DecompositionSpec", "Term", "TermSide", "cx_decomposition",
    "cz_decomposition", "gate_cut_decomposition", "reconstruct_channel",
    "reconstruction_error", "rzz_decomposition", "target_channel",
    "wire_cut_decomposition",
    "EstimatorRun", "GateCut", "IncompatibleObservableError",
    "NotDisconnectedError", "ShotAllocation", "WireCut", "allocate_shots",
    "combine_means", "cut_estimate", "cut_specs", "plan_partitions",
    "variant_distribution",
    "ExperimentConfig", "ExperimentSummary", "ring_circuit", "ring_cuts",
    "variance_experiment",
    "ObsFactor", "ProductObservable", "expectation_value",
    "pauli_z_observable", "value_table",
    "MAX_QUBITS", "TooManyQubitsError", "apply_gate", "basis_bits",
    "gate_matrix", "simulate_statevector", "zero_state",
]
