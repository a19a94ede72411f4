"""Dense statevector simulator, the exact oracle for the cutting estimator.

State layout: a complex vector of length 2**n where bit q of a basis index is
read as ``(index >> (n - 1 - q)) & 1``, i.e. qubit 0 owns the most significant
bit. ``basis_bits`` is the one place this convention lives.
"""

from __future__ import annotations

import cmath
import math

import numpy as np

from ..qasm import CircuitIR, GateApp

MAX_QUBITS = 20


class TooManyQubitsError(Exception):
    pass


def _u3(theta: float, phi: float, lam: float) -> np.ndarray:
    c, s = math.cos(theta / 2.0), math.sin(theta / 2.0)
    return np.array([
        [c, -cmath.exp(1j * lam) * s],
        [cmath.exp(1j * phi) * s, cmath.exp(1j * (phi + lam)) * c],
    ])


_SQ = {
    "id": np.eye(2, dtype=complex),
    "x": np.array([[0, 1], [1, 0]], dtype=complex),
    "y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "z": np.array([[1, 0], [0, -1]], dtype=complex),
    "h": np.array([[1, 1], [1, -1]], dtype=complex) / math.sqrt(2),
    "s": np.diag([1, 1j]).astype(complex),
    "sdg": np.diag([1, -1j]).astype(complex),
    "t": np.diag([1, cmath.exp(1j * math.pi / 4)]),
    "tdg": np.diag([1, cmath.exp(-1j * math.pi / 4)]),
    "sx": np.array([[1 + 1j, 1 - 1j], [1 - 1j, 1 + 1j]], dtype=complex) / 2,
    "sxdg": np.array([[1 - 1j, 1 + 1j], [1 + 1j, 1 - 1j]], dtype=complex) / 2,
}


def _controlled(u: np.ndarray) -> np.ndarray:
    out = np.eye(4, dtype=complex)
    out[2:, 2:] = u
    return out


def gate_matrix(gate: GateApp) -> np.ndarray:
    """Unitary of a gate application (2x2 or 4x4, control-first for 2q)."""
    kind, p = gate.kind, gate.params
    if kind in _SQ:
        return _SQ[kind]
    if kind == "rx":
        return _u3(p[0], -math.pi / 2, math.pi / 2)
    if kind == "ry":
        return _u3(p[0], 0.0, 0.0)
    if kind == "rz":
        return np.diag([cmath.exp(-0.5j * p[0]), cmath.exp(0.5j * p[0])])
    if kind in ("p", "u1"):
        return np.diag([1.0, cmath.exp(1j * p[0])])
    if kind == "u2":
        return _u3(math.pi / 2, p[0], p[1])
    if kind in ("u3", "u"):
        return _u3(p[0], p[1], p[2])
    if kind == "cx":
        return _controlled(_SQ["x"])
    if kind == "cy":
        return _controlled(_SQ["y"])
    if kind == "cz":
        return _controlled(_SQ["z"])
    if kind == "ch":
        return _controlled(_SQ["h"])
    if kind == "swap":
        return np.array([[1, 0, 0, 0], [0, 0, 1, 0], [0, 1, 0, 0], [0, 0, 0, 1]],
                        dtype=complex)
    if kind == "rzz":
        a = cmath.exp(-0.5j * p[0])
        b = cmath.exp(0.5j * p[0])
        return np.diag([a, b, b, a])
    if kind in ("rxx", "ryy"):
        c, s = math.cos(p[0] / 2.0), math.sin(p[0] / 2.0)
        m = np.eye(4, dtype=complex) * c
        m[1, 2] = m[2, 1] = -1j * s
        corner = -1j * s if kind == "rxx" else 1j * s
        m[0, 3] = m[3, 0] = corner
        return m
    if kind == "crz":
        return _controlled(np.diag([cmath.exp(-0.5j * p[0]), cmath.exp(0.5j * p[0])]))
    if kind == "crx":
        return _controlled(_u3(p[0], -math.pi / 2, math.pi / 2))
    if kind == "cry":
        return _controlled(_u3(p[0], 0.0, 0.0))
    if kind in ("cp", "cu1"):
        return _controlled(np.diag([1.0, cmath.exp(1j * p[0])]))
    raise ValueError(f"no matrix for gate '{kind}'")


def zero_state(num_qubits: int) -> np.ndarray:
    if num_qubits > MAX_QUBITS:
        raise TooManyQubitsError(
            f"{num_qubits} qubits exceeds the dense-vector cap of {MAX_QUBITS}")
    state = np.zeros(2 ** num_qubits, dtype=complex)
    state[0] = 1.0
    return state


def apply_gate(state: np.ndarray, num_qubits: int, gate: GateApp) -> np.ndarray:
    """Apply one gate in place-ish (returns the new array)."""
    u = gate_matrix(gate)
    tensor = state.reshape([2] * num_qubits)
    if len(gate.qubits) == 1:
        q = gate.qubits[0]
        tensor = np.tensordot(u, tensor, axes=([1], [q]))
        tensor = np.moveaxis(tensor, 0, q)
    else:
        q0, q1 = gate.qubits
        u4 = u.reshape(2, 2, 2, 2)
        tensor = np.tensordot(u4, tensor, axes=([2, 3], [q0, q1]))
        tensor = np.moveaxis(tensor, [0, 1], [q0, q1])
    return tensor.reshape(-1)


def simulate_statevector(circuit: CircuitIR, initial: int = 0) -> np.ndarray:
    """Exact final state of the circuit from computational basis state ``initial``."""
    if circuit.num_qubits > MAX_QUBITS:
        raise TooManyQubitsError(
            f"{circuit.num_qubits} qubits exceeds the dense-vector cap of {MAX_QUBITS}")
    state = np.zeros(2 ** circuit.num_qubits, dtype=complex)
    state[initial] = 1.0
    for gate in circuit.gates:
        state = apply_gate(state, circuit.num_qubits, gate)
    return state


def basis_bits(num_qubits: int, qubit: int) -> np.ndarray:
    """Bit of ``qubit`` across all basis indices, as a 0/1 int array."""
    return (np.arange(2 ** num_qubits) >> (num_qubits - 1 - qubit)) & 1
