"""Product observables: diagonal postprocessing that factors across qubits.

An observable is a product of factors, each mapping the bits of a few qubits
into [-1, 1]. The global postprocessing of a measured bitstring is the product
of all factor values, so any grouping of the factors along partition
boundaries keeps the product intact.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Iterable

import numpy as np

from ..qasm import CircuitIR
from .statevector import basis_bits, simulate_statevector


@dataclass(frozen=True)
class ObsFactor:
    """One factor: a [-1, 1] table over the bits of ``qubits``.

    ``table[i]`` is the value when the bits of the listed qubits, read in
    order as a big-endian integer, equal ``i``.
    """

    qubits: tuple[int, ...]
    table: tuple[float, ...]

    def __post_init__(self):
        if len(self.table) != 2 ** len(self.qubits):
            raise ValueError("table size must be 2**len(qubits)")
        if any(abs(v) > 1.0 + 1e-12 for v in self.table):
            raise ValueError("factor values must lie in [-1, 1]")

    @classmethod
    def from_function(cls, qubits: Iterable[int],
                      fn: Callable[[tuple[int, ...]], float]) -> "ObsFactor":
        qubits = tuple(qubits)
        table = []
        for idx in range(2 ** len(qubits)):
            bits = tuple((idx >> (len(qubits) - 1 - k)) & 1 for k in range(len(qubits)))
            table.append(float(fn(bits)))
        return cls(qubits, tuple(table))


@dataclass(frozen=True)
class ProductObservable:
    factors: tuple[ObsFactor, ...]

    def qubits(self) -> frozenset[int]:
        out: set[int] = set()
        for f in self.factors:
            out |= set(f.qubits)
        return frozenset(out)


def pauli_z_observable(qubits: Iterable[int]) -> ProductObservable:
    """Tensor product of Pauli Z on the given qubits: one (+1, -1) factor each."""
    return ProductObservable(tuple(ObsFactor((q,), (1.0, -1.0)) for q in qubits))


def value_table(obs_factors: Iterable[ObsFactor], num_qubits: int,
                qubit_map: dict[int, int] | None = None) -> np.ndarray:
    """Factor product over every basis state of a ``num_qubits`` register.

    ``qubit_map`` translates factor qubit labels to register positions; the
    identity map is used when omitted.
    """
    values = np.ones(2 ** num_qubits)
    for factor in obs_factors:
        idx = np.zeros(2 ** num_qubits, dtype=np.int64)
        width = len(factor.qubits)
        for k, q in enumerate(factor.qubits):
            pos = q if qubit_map is None else qubit_map[q]
            idx |= basis_bits(num_qubits, pos).astype(np.int64) << (width - 1 - k)
        values = values * np.asarray(factor.table)[idx]
    return values


def expectation_value(circuit: CircuitIR, obs: ProductObservable) -> float:
    """Exact expectation of a product observable from the dense statevector."""
    state = simulate_statevector(circuit)
    probs = np.abs(state) ** 2
    return float(probs @ value_table(obs.factors, circuit.num_qubits))
