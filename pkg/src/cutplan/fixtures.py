"""Self-contained benchmark circuits.

Transverse-field chain circuits in the style of the large-scale benchmark
suites: per layer, an rx rotation on every wire and a cx-rz-cx gadget on every
neighbouring pair. The entangling structure is a chain, so a capped
partitioner should split it with a handful of wire cuts.
"""

from __future__ import annotations

import numpy as np

from .qasm import CircuitIR, GateApp


def ising_chain(width: int, depth: int = 1, seed: int = 0,
                name: str | None = None) -> CircuitIR:
    """Chain circuit on ``width`` qubits with ``depth`` entangling layers."""
    if width < 2:
        raise ValueError("need at least 2 qubits")
    rng = np.random.default_rng([seed, width, depth])
    gates: list[GateApp] = []
    for _ in range(depth):
        for q in range(width):
            gates.append(GateApp("rx", (q,), (float(rng.uniform(0, 2 * np.pi)),)))
        for q in range(width - 1):
            angle = float(rng.uniform(0, 2 * np.pi))
            gates.append(GateApp("cx", (q, q + 1)))
            gates.append(GateApp("rz", (q + 1,), (angle,)))
            gates.append(GateApp("cx", (q, q + 1)))
    for q in range(width):
        gates.append(GateApp("rz", (q,), (float(rng.uniform(0, 2 * np.pi)),)))
    return CircuitIR(width, tuple(gates), name or f"ising_n{width}")


def chain3() -> CircuitIR:
    """The 3-qubit two-gate chain: the smallest fixture with a real choice
    between cutting a gate and cutting a wire."""
    return CircuitIR(3, (GateApp("cx", (0, 1)), GateApp("cx", (1, 2))), "chain3")
