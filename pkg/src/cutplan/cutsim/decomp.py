"""Quasiprobability decompositions backing the two cut types.

── Wire (time-like) cut: identity channel in 8 measure-and-prepare terms ──────

    rho = 1/2 [ tr(rho)·I + tr(X rho)·X + tr(Y rho)·Y + tr(Z rho)·Z ]

expanded so each term is a single (measurement basis, outcome sign, prepared
state) triple:

    +1/2 (measure Z, ignore sign,  prepare |0>)
    +1/2 (measure Z, ignore sign,  prepare |1>)
    +1/2 (measure Z, signed,       prepare |0>)
    -1/2 (measure Z, signed,       prepare |1>)
    +1/2 (measure X, signed,       prepare |+>)
    -1/2 (measure X, signed,       prepare |->)
    +1/2 (measure Y, signed,       prepare |+i>)
    -1/2 (measure Y, signed,       prepare |-i>)

8 coefficients of magnitude 1/2: one_norm = 4, sq_norm = 2.

── Gate (space-like) cut: ZZ-rotation core in 6 local terms ───────────────────

With c = cos(theta/2), s = sin(theta/2) and U = exp(-i theta/2 Z⊗Z):

    U rho U† = c²·rho + s²·(Z⊗Z) rho (Z⊗Z) - i·cs·[Z⊗Z, rho]

and the commutator splits into local pieces via

    -i[Z, rho]     = Rz(+pi/2) rho Rz(+pi/2)† - Rz(-pi/2) rho Rz(-pi/2)†
    {Z, rho}/2     = P0 rho P0 - P1 rho P1       (signed Z measurement, kept)

giving terms (c², I⊗I), (s², Z⊗Z), (±cs, measure⊗rotation) on either side:
one_norm = 1 + 2|sin theta| and sq_norm = 1 + sin²(theta)/2, i.e. 3 and 1.5 at
theta = pi/2. CZ is this core at theta = -pi/2 with an Rz(pi/2) correction on
both wires; CX conjugates the CZ target side by Hadamards.

Every spec registered here is checked against its target channel by
``reconstruct_channel``: tests trust the process-matrix oracle, not this
docstring.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ..qasm import GateApp
from .statevector import gate_matrix

MEAS_NONE = None
MEAS_SIGNED = "signed"
MEAS_PLAIN = "plain"


@dataclass(frozen=True)
class TermSide:
    """What one side of the cut does for one decomposition term.

    ``gates`` run first, then the optional Z measurement (sign recorded when
    ``signed``), then ``post_gates``. For wire cuts the measure side ends the
    wire segment and the prepare side's gates initialise the fresh segment.
    """

    gates: tuple[tuple[str, tuple[float, ...]], ...] = ()
    measure: str | None = MEAS_NONE
    post_gates: tuple[tuple[str, tuple[float, ...]], ...] = ()


@dataclass(frozen=True)
class Term:
    coeff: float
    sides: tuple[TermSide, TermSide]


@dataclass(frozen=True)
class DecompositionSpec:
    cut_kind: str                 # "space" | "time"
    gate_kind: str | None         # target gate for space cuts
    params: tuple[float, ...]
    terms: tuple[Term, ...]

    @property
    def kappa(self) -> float:
        return sum(abs(t.coeff) for t in self.terms)

    @property
    def tau(self) -> float:
        return sum(t.coeff ** 2 for t in self.terms)


def _g(kind: str, *params: float) -> tuple[str, tuple[float, ...]]:
    return (kind, tuple(params))


def wire_cut_decomposition() -> DecompositionSpec:
    """Identity channel as 8 signed measure-and-prepare terms."""
    half = 0.5
    terms = (
        Term(+half, (TermSide(measure=MEAS_PLAIN), TermSide())),
        Term(+half, (TermSide(measure=MEAS_PLAIN), TermSide(gates=(_g("x"),)))),
        Term(+half, (TermSide(measure=MEAS_SIGNED), TermSide())),
        Term(-half, (TermSide(measure=MEAS_SIGNED), TermSide(gates=(_g("x"),)))),
        Term(+half, (TermSide(gates=(_g("h"),), measure=MEAS_SIGNED),
                     TermSide(gates=(_g("h"),)))),
        Term(-half, (TermSide(gates=(_g("h"),), measure=MEAS_SIGNED),
                     TermSide(gates=(_g("x"), _g("h"))))),
        Term(+half, (TermSide(gates=(_g("sdg"), _g("h")), measure=MEAS_SIGNED),
                     TermSide(gates=(_g("h"), _g("s"))))),
        Term(-half, (TermSide(gates=(_g("sdg"), _g("h")), measure=MEAS_SIGNED),
                     TermSide(gates=(_g("x"), _g("h"), _g("s"))))),
    )
    return DecompositionSpec("time", None, (), terms)


def _zz_core_terms(theta: float) -> list[tuple[float, TermSide, TermSide]]:
    # half-angle forms keep the theta = +-pi/2 coefficients exactly at 1/2
    c2 = 0.5 * (1.0 + math.cos(theta))
    s2 = 0.5 * (1.0 - math.cos(theta))
    cs = 0.5 * math.sin(theta)
    return [
        (c2, TermSide(), TermSide()),
        (s2, TermSide(gates=(_g("z"),)), TermSide(gates=(_g("z"),))),
        (+cs, TermSide(measure=MEAS_SIGNED), TermSide(gates=(_g("rz", math.pi / 2),))),
        (-cs, TermSide(measure=MEAS_SIGNED), TermSide(gates=(_g("rz", -math.pi / 2),))),
        (+cs, TermSide(gates=(_g("rz", math.pi / 2),)), TermSide(measure=MEAS_SIGNED)),
        (-cs, TermSide(gates=(_g("rz", -math.pi / 2),)), TermSide(measure=MEAS_SIGNED)),
    ]


def _append_gates(side: TermSide, extra: tuple) -> TermSide:
    if side.measure is None:
        return TermSide(gates=side.gates + extra, measure=None,
                        post_gates=side.post_gates)
    return TermSide(gates=side.gates, measure=side.measure,
                    post_gates=side.post_gates + extra)


def _prepend_gates(side: TermSide, extra: tuple) -> TermSide:
    return TermSide(gates=extra + side.gates, measure=side.measure,
                    post_gates=side.post_gates)


def rzz_decomposition(theta: float) -> DecompositionSpec:
    terms = tuple(Term(a, (s0, s1)) for a, s0, s1 in _zz_core_terms(theta))
    return DecompositionSpec("space", "rzz", (theta,), terms)


def cz_decomposition() -> DecompositionSpec:
    correction = (_g("rz", math.pi / 2),)
    terms = []
    for a, s0, s1 in _zz_core_terms(-math.pi / 2.0):
        terms.append(Term(a, (_append_gates(s0, correction),
                              _append_gates(s1, correction))))
    return DecompositionSpec("space", "cz", (), tuple(terms))


def cx_decomposition() -> DecompositionSpec:
    h = (_g("h"),)
    terms = []
    for t in cz_decomposition().terms:
        side1 = _append_gates(_prepend_gates(t.sides[1], h), h)
        terms.append(Term(t.coeff, (t.sides[0], side1)))
    return DecompositionSpec("space", "cx", (), tuple(terms))


def gate_cut_decomposition(gate: GateApp) -> DecompositionSpec:
    """Decomposition for cutting this 2-qubit gate, side 0 = first operand."""
    if gate.kind == "cx":
        return cx_decomposition()
    if gate.kind == "cz":
        return cz_decomposition()
    if gate.kind == "rzz":
        return rzz_decomposition(gate.params[0])
    raise ValueError(f"no registered cut decomposition for gate '{gate.kind}'")


# ---------------------------------------------------------------------------
# process-matrix reconstruction (the oracle)
# ---------------------------------------------------------------------------
#
# Superoperators act on row-major vec(rho): vec(A rho B) = (A ⊗ B^T) vec(rho).

_P0 = np.diag([1.0, 0.0]).astype(complex)
_P1 = np.diag([0.0, 1.0]).astype(complex)


def _conj_superop(u: np.ndarray) -> np.ndarray:
    return np.kron(u, u.conj())


def _embed(u: np.ndarray, side: int) -> np.ndarray:
    eye = np.eye(2, dtype=complex)
    return np.kron(u, eye) if side == 0 else np.kron(eye, u)


def _side_unitary(gates: tuple) -> np.ndarray:
    u = np.eye(2, dtype=complex)
    for kind, params in gates:
        u = gate_matrix(GateApp(kind, (0,), params)) @ u
    return u


def _space_term_superop(term: Term) -> np.ndarray:
    """16x16 superoperator of one gate-cut term on the 2-qubit space."""
    op = np.eye(16, dtype=complex)
    for side, ts in enumerate(term.sides):
        pre = _embed(_side_unitary(ts.gates), side)
        op = _conj_superop(pre) @ op
        if ts.measure is not None:
            p0, p1 = _embed(_P0, side), _embed(_P1, side)
            sign = -1.0 if ts.measure == MEAS_SIGNED else 1.0
            meas = np.kron(p0, p0.conj()) + sign * np.kron(p1, p1.conj())
            op = meas @ op
        post = _embed(_side_unitary(ts.post_gates), side)
        op = _conj_superop(post) @ op
    return op


def _time_term_superop(term: Term) -> np.ndarray:
    """4x4 superoperator of one wire-cut term: measure end, then prepare end."""
    meas_side, prep_side = term.sides
    u_meas = _side_unitary(meas_side.gates)
    sign = -1.0 if meas_side.measure == MEAS_SIGNED else 1.0
    effect = u_meas.conj().T @ (_P0 + sign * _P1) @ u_meas
    u_prep = _side_unitary(prep_side.gates)
    prepared = u_prep @ _P0 @ u_prep.conj().T
    # rho -> tr(effect rho) * prepared
    return np.outer(prepared.reshape(-1), effect.T.reshape(-1))


def reconstruct_channel(spec: DecompositionSpec) -> np.ndarray:
    """Sum of coefficient-weighted term channels, as a superoperator matrix."""
    if spec.cut_kind == "time":
        total = np.zeros((4, 4), dtype=complex)
        for term in spec.terms:
            total += term.coeff * _time_term_superop(term)
        return total
    total = np.zeros((16, 16), dtype=complex)
    for term in spec.terms:
        total += term.coeff * _space_term_superop(term)
    return total


def target_channel(spec: DecompositionSpec) -> np.ndarray:
    """The channel the decomposition must reproduce."""
    if spec.cut_kind == "time":
        return np.eye(4, dtype=complex)
    gate = GateApp(spec.gate_kind, (0, 1), spec.params)
    return _conj_superop(gate_matrix(gate))


def reconstruction_error(spec: DecompositionSpec) -> float:
    """Max-norm distance between the reconstructed and target channels."""
    return float(np.max(np.abs(reconstruct_channel(spec) - target_channel(spec))))
