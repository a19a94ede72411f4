"""Shared test oracles, all deliberately independent of the library's own
cached-sum code paths: everything here classifies raw edge lists directly."""

from __future__ import annotations

import math

import numpy as np
import pytest

from cutplan.clustering import Clustering
from cutplan.graph import CutGraph, CutKind, Edge, Node


def make_edge(u, v, kappa, tau, kind=CutKind.TIME):
    return Edge(min(u, v), max(u, v), kind, w=math.log(kappa ** 2),
                w_hat=math.log(tau), kappa=kappa, tau=tau)


def random_graph(rng: np.random.Generator, max_nodes: int = 10,
                 self_loops: bool = True) -> CutGraph:
    """Connected-ish weighted multigraph with varied kappa/tau per edge."""
    n = int(rng.integers(3, max_nodes + 1))
    nodes = tuple(Node(i, frozenset((int(rng.integers(0, n)),))) for i in range(n))
    edges = []
    for i in range(1, n):  # spanning tree keeps things connected
        j = int(rng.integers(0, i))
        edges.append(_rand_edge(rng, i, j))
    extra = int(rng.integers(0, n))
    for _ in range(extra):
        i, j = int(rng.integers(0, n)), int(rng.integers(0, n))
        if i == j and not self_loops:
            continue
        edges.append(_rand_edge(rng, i, j))
    return CutGraph(nodes, tuple(edges))


def _rand_edge(rng, u, v):
    kappa = float(rng.uniform(1.2, 4.0))
    tau = float(rng.uniform(1.0, kappa ** 2))
    kind = CutKind.TIME if rng.random() < 0.5 else CutKind.SPACE
    return make_edge(u, v, kappa, tau, kind)


def random_clustering(rng: np.random.Generator, graph: CutGraph,
                      max_qubits: int = 99) -> Clustering:
    n = graph.num_nodes
    k = int(rng.integers(1, n + 1))
    assignment = {i: int(rng.integers(0, k)) for i in range(n)}
    # cluster labels need not be dense; from_assignment keeps only used ones
    return Clustering.from_assignment(graph, assignment, max_qubits)


# -- modularity from first principles -----------------------------------------

def modularity_oracle(graph: CutGraph, assignment: dict[int, int]) -> float:
    """Direct evaluation: Q = sum_c [M_c/m - (Sigma_c/(2m))^2]."""
    m = sum(e.w for e in graph.edges)
    clusters = set(assignment.values())
    q = 0.0
    for c in clusters:
        intra = 0.0
        attached = 0.0
        for e in graph.edges:
            cu, cv = assignment[e.u], assignment[e.v]
            if cu == c and cv == c:
                intra += e.w
                attached += 2.0 * e.w
            elif cu == c or cv == c:
                attached += e.w
        q += intra / m - (attached / (2.0 * m)) ** 2
    return q


# -- log overhead from first principles ----------------------------------------

def log_overhead_oracle(graph: CutGraph, assignment: dict[int, int],
                        cluster: int) -> float:
    """ln R + sum of w over cuts attached to the cluster + sum of w_hat over
    the rest, by explicit edge classification."""
    r = len(set(assignment.values()))
    total = math.log(r)
    for e in graph.edges:
        cu, cv = assignment[e.u], assignment[e.v]
        if cu == cv:
            continue
        if cluster in (cu, cv):
            total += e.w
        else:
            total += e.w_hat
    return total


def max_log_overhead_oracle(graph: CutGraph, assignment: dict[int, int]) -> float:
    return max(log_overhead_oracle(graph, assignment, c)
               for c in set(assignment.values()))


# -- exhaustive partition search -------------------------------------------------

def set_partitions(items: list[int]):
    """Every partition of ``items`` into nonempty blocks."""
    if not items:
        yield []
        return
    head, rest = items[0], items[1:]
    for partial in set_partitions(rest):
        for k in range(len(partial)):
            yield partial[:k] + [partial[k] + [head]] + partial[k + 1:]
        yield [[head]] + partial


def best_feasible_log_overhead(graph: CutGraph, max_qubits: int) -> float:
    """Exhaustive minimum of the worst-cluster log overhead over all
    qubit-feasible clusterings."""
    node_ids = [n.id for n in graph.nodes]
    best = math.inf
    for blocks in set_partitions(node_ids):
        feasible = True
        for block in blocks:
            qubits = set()
            for i in block:
                qubits |= graph.nodes[i].qubits
            if len(qubits) > max_qubits:
                feasible = False
                break
        if not feasible:
            continue
        assignment = {}
        for c, block in enumerate(blocks):
            for i in block:
                assignment[i] = c
        best = min(best, max_log_overhead_oracle(graph, assignment))
    return best


@pytest.fixture
def rng():
    return np.random.default_rng(20240814)
