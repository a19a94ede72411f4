"""Doubly-weighted cut graph.

Every 2-qubit gate contributes two nodes (one per wire it touches) joined by a
space-like edge; time-adjacent nodes on a common wire are joined by a
time-like edge. Cutting a space-like edge decomposes the gate into local
operations; cutting a time-like edge splits the wire with a measure-and-prepare
pair. Each edge carries two weights derived from its decomposition factors:

    w     = ln(kappa^2)   kappa = sum of |coefficients|, drives the overhead of
                          clusters the cut is attached to
    w_hat = ln(tau)       tau = sum of squared coefficients, the residual cost
                          paid by clusters the cut is *not* attached to

Contraction collapses clusters to supernodes, summing both weights
independently and keeping intra-cluster weight as self-loops.
"""

from __future__ import annotations

import enum
import math
import warnings
from dataclasses import dataclass, field
from typing import TYPE_CHECKING

from .qasm import CircuitIR

if TYPE_CHECKING:  # pragma: no cover
    from .clustering import Clustering


class UnknownGateWeightError(Exception):
    """A 2-qubit gate kind has no weight entry and fallback is disabled."""


class CutKind(enum.Enum):
    SPACE = "space"
    TIME = "time"
    MERGED = "merged"


@dataclass(frozen=True)
class CutWeights:
    """Overhead factors of one cut decomposition."""

    kappa: float
    tau: float

    def __post_init__(self):
        if self.kappa < 1.0 or self.tau < 1.0:
            raise ValueError(f"overhead factors must be >= 1, got {self}")
        if self.tau > self.kappa ** 2 + 1e-12:
            raise ValueError(f"tau must not exceed kappa^2, got {self}")

    @property
    def w(self) -> float:
        return math.log(self.kappa ** 2)

    @property
    def w_hat(self) -> float:
        return math.log(self.tau)


#: measure-and-prepare wire cut: 8 signed terms of coefficient 1/2
TIME_LIKE_WEIGHTS = CutWeights(kappa=4.0, tau=2.0)
#: 6-term local decomposition of CX/CZ (and rzz at theta=pi/2)
CX_LIKE_WEIGHTS = CutWeights(kappa=3.0, tau=1.5)

DEFAULT_SPACE_WEIGHTS: dict[str, CutWeights] = {
    "cx": CX_LIKE_WEIGHTS,
    "cz": CX_LIKE_WEIGHTS,
    "rzz": CX_LIKE_WEIGHTS,
}


@dataclass(frozen=True)
class WeightTable:
    """Per-(cut kind, gate kind) overhead factors.

    Unknown 2-qubit gates fall back to the CX entry with a warning unless
    ``fallback`` is disabled.
    """

    time: CutWeights = TIME_LIKE_WEIGHTS
    space: dict[str, CutWeights] = field(default_factory=lambda: dict(DEFAULT_SPACE_WEIGHTS))
    fallback: bool = True

    def space_entry(self, gate_kind: str) -> CutWeights:
        entry = self.space.get(gate_kind)
        if entry is not None:
            return entry
        if not self.fallback:
            raise UnknownGateWeightError(
                f"no space-like weight entry for 2-qubit gate '{gate_kind}'"
            )
        warnings.warn(
            f"no weight entry for 2-qubit gate '{gate_kind}'; using the CX entry "
            f"(kappa=3, tau=1.5)",
            stacklevel=3,
        )
        return CX_LIKE_WEIGHTS


DEFAULT_WEIGHTS = WeightTable()


@dataclass(frozen=True)
class Node:
    id: int
    qubits: frozenset[int]
    gate_id: int | None = None
    #: operand slot (0 or 1) within the source gate, for atomic nodes
    slot: int | None = None
    #: for supernodes: ids of the nodes of the graph this one was contracted from
    members: tuple[int, ...] = ()

    def dot_name(self) -> str:
        if self.gate_id is not None:
            return f"g{self.gate_id}_{self.slot}"
        return f"n{self.id}"


@dataclass(frozen=True)
class Edge:
    """Undirected edge; ``u == v`` encodes a self-loop."""

    u: int
    v: int
    kind: CutKind
    w: float
    w_hat: float
    # exact linear-space factors; w == ln(kappa^2), w_hat == ln(tau) up to float error
    kappa: float
    tau: float

    def is_self_loop(self) -> bool:
        return self.u == self.v

    def other(self, node: int) -> int:
        return self.v if node == self.u else self.u


@dataclass(frozen=True)
class CutGraph:
    nodes: tuple[Node, ...]
    edges: tuple[Edge, ...]

    @property
    def num_nodes(self) -> int:
        return len(self.nodes)

    def qubits(self) -> frozenset[int]:
        out: set[int] = set()
        for n in self.nodes:
            out |= n.qubits
        return frozenset(out)

    def total_w(self) -> float:
        return sum(e.w for e in self.edges)

    def total_w_hat(self) -> float:
        return sum(e.w_hat for e in self.edges)

    def adjacency(self) -> list[list[tuple[int, Edge]]]:
        """Per node: (neighbour id, edge) pairs; self-loops listed once."""
        adj: list[list[tuple[int, Edge]]] = [[] for _ in self.nodes]
        for e in self.edges:
            if e.is_self_loop():
                adj[e.u].append((e.u, e))
            else:
                adj[e.u].append((e.v, e))
                adj[e.v].append((e.u, e))
        return adj


def _make_edge(u: int, v: int, kind: CutKind, weights: CutWeights) -> Edge:
    a, b = (u, v) if u <= v else (v, u)
    return Edge(a, b, kind, w=weights.w, w_hat=weights.w_hat,
                kappa=weights.kappa, tau=weights.tau)


def build_cut_graph(circuit: CircuitIR, weights: WeightTable = DEFAULT_WEIGHTS) -> CutGraph:
    """Convert a circuit into its doubly-weighted cut graph.

    1-qubit gates are ignored. Each 2-qubit gate adds one node per operand wire
    and a space-like edge between them; consecutive nodes on a wire are joined
    by a time-like edge.
    """
    nodes: list[Node] = []
    edges: list[Edge] = []
    last_on_wire: dict[int, int] = {}
    for gate_id, gate in circuit.two_qubit_gates():
        entry = weights.space_entry(gate.kind)
        pair = []
        for slot, q in enumerate(gate.qubits):
            node = Node(id=len(nodes), qubits=frozenset((q,)), gate_id=gate_id,
                        slot=slot)
            nodes.append(node)
            pair.append(node.id)
            if q in last_on_wire:
                edges.append(_make_edge(last_on_wire[q], node.id, CutKind.TIME,
                                        weights.time))
            last_on_wire[q] = node.id
        edges.append(_make_edge(pair[0], pair[1], CutKind.SPACE, entry))
    return CutGraph(tuple(nodes), tuple(edges))


def contract(graph: CutGraph, clustering: "Clustering") -> CutGraph:
    """Collapse each cluster into a supernode, summing both edge weights.

    Inter-cluster parallel edges merge into one edge per supernode pair;
    intra-cluster weight is kept as a self-loop. An aggregated edge keeps its
    kind when all constituents agree, otherwise it becomes ``MERGED``.
    Supernode ids are dense, in ascending order of the cluster ids they came
    from; ``members`` records the original node ids.
    """
    cluster_ids = sorted(clustering.clusters)
    new_id = {c: i for i, c in enumerate(cluster_ids)}
    nodes = []
    for c in cluster_ids:
        members = tuple(sorted(clustering.clusters[c].nodes))
        qubits = clustering.clusters[c].qubits
        nodes.append(Node(id=new_id[c], qubits=qubits, gate_id=None, members=members))

    agg: dict[tuple[int, int], list] = {}
    for e in graph.edges:
        cu = new_id[clustering.assignment[e.u]]
        cv = new_id[clustering.assignment[e.v]]
        key = (cu, cv) if cu <= cv else (cv, cu)
        entry = agg.setdefault(key, [0.0, 0.0, 1.0, 1.0, set()])
        entry[0] += e.w
        entry[1] += e.w_hat
        entry[2] *= e.kappa
        entry[3] *= e.tau
        entry[4].add(e.kind)
    edges = []
    for (u, v), (w, w_hat, kappa, tau, kinds) in sorted(agg.items()):
        kind = kinds.pop() if len(kinds) == 1 else CutKind.MERGED
        edges.append(Edge(u, v, kind, w=w, w_hat=w_hat, kappa=kappa, tau=tau))
    return CutGraph(tuple(nodes), tuple(edges))


def to_dot(graph: CutGraph, clustering: "Clustering | None" = None) -> str:
    """Render the graph in DOT, one edge label per weight pair.

    Atomic nodes are named ``g<gateid>_<slot>``; supernodes ``n<id>``. When a
    clustering is given, nodes carry their cluster id as an attribute.
    """
    lines = ["graph cutgraph {"]
    for n in graph.nodes:
        attrs = [f'qubits="{",".join(str(q) for q in sorted(n.qubits))}"']
        if clustering is not None:
            attrs.append(f'cluster="{clustering.assignment[n.id]}"')
        lines.append(f'  {n.dot_name()} [{" ".join(attrs)}];')
    for e in graph.edges:
        nu = graph.nodes[e.u].dot_name()
        nv = graph.nodes[e.v].dot_name()
        label = f"w={e.w:.6f}, ŵ={e.w_hat:.6f}, {e.kind.value}"
        lines.append(f'  {nu} -- {nv} [label="{label}"];')
    lines.append("}")
    return "\n".join(lines) + "\n"
