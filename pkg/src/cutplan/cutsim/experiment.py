"""Variance-bound validation experiment.

The test family is an 8-qubit parametric circuit on a ring: a layer of
random ry/rz rotations on every qubit, one rzz(pi/2) entangler per adjacent
ring pair, and a second rotation layer. Cutting three of the entanglers
splits the ring into three blocks {0,1,2} | {3,4,5} | {6,7} with one cut
between each pair of blocks; cutting four splits it into {0,1} | {2,3} |
{4,5} | {6,7} arranged in a ring. Each repetition draws fresh rotation
angles, estimates <Z...Z> through the cutting estimator with the shot budget
for the requested eps, and records the error against the exact statevector
value. The claim under test: the standard deviation of those errors stays
below eps.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..qasm import CircuitIR, GateApp
from .estimator import GateCut, cut_estimate
from .observable import expectation_value, pauli_z_observable

RING_QUBITS = 8
_RING_PAIRS = tuple((q, (q + 1) % RING_QUBITS) for q in range(RING_QUBITS))
# ring pairs whose entangler gets cut, per partition count
_CUT_PAIRS = {
    3: ((2, 3), (5, 6), (7, 0)),
    4: ((1, 2), (3, 4), (5, 6), (7, 0)),
}


def ring_circuit(params: np.ndarray, name: str = "ring8") -> CircuitIR:
    """The 8-qubit test circuit; ``params`` has shape (2, 8, 2) in radians."""
    params = np.asarray(params, dtype=float)
    if params.shape != (2, RING_QUBITS, 2):
        raise ValueError(f"params must have shape (2, {RING_QUBITS}, 2)")
    gates = []
    for q in range(RING_QUBITS):
        gates.append(GateApp("ry", (q,), (float(params[0, q, 0]),)))
        gates.append(GateApp("rz", (q,), (float(params[0, q, 1]),)))
    for a, b in _RING_PAIRS:
        gates.append(GateApp("rzz", (a, b), (np.pi / 2.0,)))
    for q in range(RING_QUBITS):
        gates.append(GateApp("ry", (q,), (float(params[1, q, 0]),)))
        gates.append(GateApp("rz", (q,), (float(params[1, q, 1]),)))
    return CircuitIR(RING_QUBITS, tuple(gates), name)


def ring_cuts(partitions: int) -> list[GateCut]:
    """Gate cuts that split :func:`ring_circuit` into 3 or 4 partitions."""
    if partitions not in _CUT_PAIRS:
        raise ValueError("only 3- and 4-partition presets exist")
    offset = 2 * RING_QUBITS  # entanglers follow the first rotation layer
    return [GateCut(offset + _RING_PAIRS.index(pair)) for pair in _CUT_PAIRS[partitions]]


@dataclass(frozen=True)
class ExperimentConfig:
    partitions: int = 3
    eps: float = 0.03
    repetitions: int = 100
    seed: int = 0


@dataclass(frozen=True)
class ExperimentSummary:
    partitions: int
    eps: float
    repetitions: int
    n_total: int
    errors: tuple[float, ...]
    std: float
    mean_error: float
    seed: int

    @property
    def within_bound(self) -> bool:
        return self.std <= self.eps

    def to_json_dict(self) -> dict:
        return {
            "partitions": self.partitions,
            "eps": self.eps,
            "repetitions": self.repetitions,
            "n_total": self.n_total,
            "std": self.std,
            "mean_error": self.mean_error,
            "within_bound": self.within_bound,
            "errors": list(self.errors),
        }


def variance_experiment(config: ExperimentConfig) -> ExperimentSummary:
    """Run the repetition loop and summarise the error distribution."""
    if config.repetitions < 1:
        raise ValueError("need at least one repetition")
    cuts = ring_cuts(config.partitions)
    obs = pauli_z_observable(range(RING_QUBITS))
    errors = []
    n_total = None
    for rep in range(config.repetitions):
        rng = np.random.default_rng([config.seed, rep])
        params = rng.uniform(0.0, 2.0 * np.pi, size=(2, RING_QUBITS, 2))
        circuit = ring_circuit(params)
        exact = expectation_value(circuit, obs)
        run = cut_estimate(circuit, cuts, obs, config.eps, seed=int(rng.integers(2 ** 31)))
        errors.append(run.estimate - exact)
        n_total = run.shots_used
    arr = np.array(errors)
    std = float(arr.std(ddof=1)) if len(arr) > 1 else 0.0
    return ExperimentSummary(
        partitions=config.partitions,
        eps=config.eps,
        repetitions=config.repetitions,
        n_total=int(n_total),
        errors=tuple(float(e) for e in errors),
        std=std,
        mean_error=float(arr.mean()),
        seed=config.seed,
    )
