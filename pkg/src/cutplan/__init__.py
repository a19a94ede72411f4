"""cutplan: overhead-aware partitioning of quantum circuits for cutting.

Circuits become doubly-weighted graphs whose edge cuts are gate or wire cuts;
a two-stage constrained clustering picks cut locations minimizing the worst
per-partition sampling overhead, and a Monte-Carlo harness verifies the shot
budget that overhead implies.
"""

from .clustering import (Cluster, Clustering, InfeasibleCapError,
                         ModularityState, PipelineResult, StageMetrics,
                         modularity, modularity_gain, qubit_feasible,
                         run_pipeline, step1_modularity, step2_lq_min)
from .graph import (CutGraph, CutKind, CutWeights, Edge, Node,
                    UnknownGateWeightError, WeightTable, build_cut_graph,
                    contract, to_dot, DEFAULT_WEIGHTS)
from .overhead import (OverheadReport, build_report, cluster_log_overhead,
                       cut_summary, max_log_overhead, cubic_bound, prior_bound,
                       shot_budget)
from .qasm import (CircuitIR, DuplicateOperandError, GateApp, QasmError,
                   QasmSyntaxError, UndeclaredRegisterError,
                   UnsupportedGateError, parse_qasm, parse_qasm_file, to_qasm)

__version__ = "0.1.0"

__all__ = [
    "Cluster", "Clustering", "InfeasibleCapError", "ModularityState",
    "PipelineResult", "StageMetrics", "modularity", "modularity_gain",
    "qubit_feasible", "run_pipeline", "step1_modularity", "step2_lq_min",
    "CutGraph", "CutKind", "CutWeights", "Edge", "Node",
    "UnknownGateWeightError", "WeightTable", "build_cut_graph", "contract",
    "to_dot", "DEFAULT_WEIGHTS",
    "OverheadReport", "build_report", "cluster_log_overhead", "cut_summary",
    "max_log_overhead", "cubic_bound", "prior_bound", "shot_budget",
    "CircuitIR", "DuplicateOperandError", "GateApp", "QasmError",
    "QasmSyntaxError", "UndeclaredRegisterError", "UnsupportedGateError",
    "parse_qasm", "parse_qasm_file", "to_qasm",
    "__version__",
]
