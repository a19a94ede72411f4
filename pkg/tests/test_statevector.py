import math

import numpy as np
import pytest

from cutplan.cutsim import (TooManyQubitsError, basis_bits, expectation_value,
                            gate_matrix, pauli_z_observable,
                            simulate_statevector)
from cutplan.cutsim.observable import ObsFactor, value_table
from cutplan.qasm import CircuitIR, GateApp


def test_hadamard():
    state = simulate_statevector(CircuitIR(1, (GateApp("h", (0,)),)))
    assert state == pytest.approx(np.array([1, 1]) / math.sqrt(2))


def test_bell_zz():
    bell = CircuitIR(2, (GateApp("h", (0,)), GateApp("cx", (0, 1))))
    state = simulate_statevector(bell)
    assert np.abs(state) ** 2 == pytest.approx([0.5, 0, 0, 0.5])
    assert expectation_value(bell, pauli_z_observable(range(2))) == pytest.approx(1.0)


def test_initial_basis_state():
    # |10>: qubit 0 owns the most significant bit
    state = simulate_statevector(CircuitIR(2, (GateApp("cx", (0, 1)),)), initial=2)
    assert np.argmax(np.abs(state)) == 3


def test_qubit_cap():
    with pytest.raises(TooManyQubitsError):
        simulate_statevector(CircuitIR(21, ()))


def _random_circuit(rng, n, depth):
    gates = []
    for _ in range(depth):
        kind = ["rx", "ry", "rz", "h", "u3"][int(rng.integers(0, 5))]
        if rng.random() < 0.45:
            a, b = rng.choice(n, size=2, replace=False)
            two = ["cx", "cz", "rzz"][int(rng.integers(0, 3))]
            params = (float(rng.uniform(0, 2 * np.pi)),) if two == "rzz" else ()
            gates.append(GateApp(two, (int(a), int(b)), params))
        else:
            nparams = {"rx": 1, "ry": 1, "rz": 1, "h": 0, "u3": 3}[kind]
            params = tuple(float(rng.uniform(0, 2 * np.pi)) for _ in range(nparams))
            gates.append(GateApp(kind, (int(rng.integers(0, n)),), params))
    return CircuitIR(n, tuple(gates))


def test_random_circuit_against_matrix_product(rng):
    """Tensor-contraction engine vs explicit full-matrix products."""
    for _ in range(6):
        circuit = _random_circuit(rng, 5, 18)
        state = simulate_statevector(circuit)
        full = np.eye(2 ** 5, dtype=complex)
        for gate in circuit.gates:
            full = _gate_full_matrix(gate, 5) @ full
        want = full[:, 0]
        assert state == pytest.approx(want, abs=1e-10)


def _gate_full_matrix(gate: GateApp, n: int) -> np.ndarray:
    """2^n x 2^n matrix of one gate, built by summing basis transitions."""
    u = gate_matrix(gate)
    dim = 2 ** n
    full = np.zeros((dim, dim), dtype=complex)
    qs = gate.qubits
    for col in range(dim):
        in_bits = [(col >> (n - 1 - q)) & 1 for q in range(n)]
        sub_in = 0
        for q in qs:
            sub_in = (sub_in << 1) | in_bits[q]
        for sub_out in range(u.shape[0]):
            amp = u[sub_out, sub_in]
            if amp == 0:
                continue
            out_bits = list(in_bits)
            tmp = sub_out
            for q in reversed(qs):
                out_bits[q] = tmp & 1
                tmp >>= 1
            row = 0
            for b in out_bits:
                row = (row << 1) | b
            full[row, col] += amp
    return full


def test_eight_qubit_fixture_against_matrix_oracle(rng):
    circuit = _random_circuit(rng, 8, 30)
    state = simulate_statevector(circuit)
    full = np.eye(2 ** 8, dtype=complex)
    for gate in circuit.gates:
        full = _gate_full_matrix(gate, 8) @ full
    assert state == pytest.approx(full[:, 0], abs=1e-10)
    assert np.abs(state) ** 2 == pytest.approx(np.abs(full[:, 0]) ** 2, abs=1e-10)


def test_basis_bits_convention():
    bits = basis_bits(3, 0)
    assert list(bits[:4]) == [0, 0, 0, 0]
    assert list(bits[4:]) == [1, 1, 1, 1]
    assert list(basis_bits(3, 2)) == [0, 1, 0, 1, 0, 1, 0, 1]


def test_value_table_factors():
    factor = ObsFactor.from_function((0, 2), lambda bits: (-1) ** (bits[0] ^ bits[1]))
    table = value_table([factor], 3)
    for idx in range(8):
        b0 = (idx >> 2) & 1
        b2 = idx & 1
        assert table[idx] == (-1) ** (b0 ^ b2)


def test_factor_range_validated():
    with pytest.raises(ValueError):
        ObsFactor((0,), (2.0, 0.0))
