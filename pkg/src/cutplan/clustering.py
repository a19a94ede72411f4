"""Two-stage qubit-constrained partitioner.

Stage 1 greedily maximizes weighted modularity (local node moves followed by
graph contraction, repeated until no move improves), never letting a cluster's
qubit union exceed the device cap. Heavy edges, whose cuts would be expensive,
end up inside clusters.

Stage 2 starts from the stage-1 supernodes and keeps moving nodes between
clusters whenever doing so lowers the worst per-cluster log overhead

    log_overhead(c) = ln R + sum_{cut edges attached to c} w
                           + sum_{cut edges elsewhere} w_hat

subject to the same qubit cap. The number of clusters R is an output of the
process, not an input.

All move acceptance uses an absolute tolerance of 1e-9 for comparing gains and
log-overhead values.
"""

from __future__ import annotations

import math
import time
from collections import Counter
from dataclasses import dataclass, field

import numpy as np

from .graph import CutGraph, contract

EPS = 1e-9


class InfeasibleCapError(Exception):
    """A single node already carries more qubits than the cap allows."""


# ---------------------------------------------------------------------------
# clustering value type
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Cluster:
    nodes: frozenset[int]
    qubits: frozenset[int]


@dataclass(frozen=True)
class Clustering:
    """Assignment of every graph node to exactly one cluster."""

    assignment: dict[int, int]
    clusters: dict[int, Cluster]
    max_qubits: int

    @classmethod
    def from_assignment(cls, graph: CutGraph, assignment: dict[int, int],
                        max_qubits: int) -> "Clustering":
        members: dict[int, set[int]] = {}
        for node, c in assignment.items():
            members.setdefault(c, set()).add(node)
        clusters = {}
        for c, nodes in members.items():
            qubits: set[int] = set()
            for n in nodes:
                qubits |= graph.nodes[n].qubits
            clusters[c] = Cluster(frozenset(nodes), frozenset(qubits))
        return cls(dict(assignment), clusters, max_qubits)

    @classmethod
    def singletons(cls, graph: CutGraph, max_qubits: int) -> "Clustering":
        return cls.from_assignment(graph, {n.id: n.id for n in graph.nodes}, max_qubits)

    @property
    def num_clusters(self) -> int:
        return len(self.clusters)

    def validate(self, graph: CutGraph) -> None:
        assert set(self.assignment) == {n.id for n in graph.nodes}, "not a cover"
        for c, cluster in self.clusters.items():
            assert cluster.nodes, f"empty cluster {c}"
            union: set[int] = set()
            for n in cluster.nodes:
                assert self.assignment[n] == c
                union |= graph.nodes[n].qubits
            assert union == set(cluster.qubits)
            assert len(cluster.qubits) <= self.max_qubits, (
                f"cluster {c} holds {len(cluster.qubits)} qubits, cap {self.max_qubits}")

    def compacted(self) -> "Clustering":
        """Renumber clusters densely, ordered by smallest member node id."""
        order = sorted(self.clusters, key=lambda c: min(self.clusters[c].nodes))
        remap = {c: i for i, c in enumerate(order)}
        return Clustering(
            {n: remap[c] for n, c in self.assignment.items()},
            {remap[c]: cl for c, cl in self.clusters.items()},
            self.max_qubits,
        )

    def to_json_dict(self) -> dict:
        return {
            "assignment": {str(n): c for n, c in sorted(self.assignment.items())},
            "clusters": {
                str(c): {"nodes": sorted(cl.nodes), "qubits": sorted(cl.qubits)}
                for c, cl in sorted(self.clusters.items())
            },
            "max_qubits": self.max_qubits,
        }


def qubit_feasible(graph: CutGraph, clustering: Clustering, i: int, c_to: int,
                   max_qubits: int) -> bool:
    """True iff moving node ``i`` into ``c_to`` keeps its qubit union within cap."""
    target = clustering.clusters[c_to].qubits
    return len(target | graph.nodes[i].qubits) <= max_qubits


# ---------------------------------------------------------------------------
# modularity
# ---------------------------------------------------------------------------

def _gain(m: float, k_i: float, k_i_cfrom: float, k_i_cto: float,
          sigma_from: float, sigma_to: float) -> float:
    """Modularity gain of moving i between clusters.

    ``sigma_from`` is the attached-weight sum of the source cluster with i
    still inside; ``sigma_to`` excludes i. k terms exclude self-loops; k_i
    counts self-loops twice.
    """
    remove = -k_i_cfrom / m + k_i * (sigma_from - k_i) / (2.0 * m * m)
    add = k_i_cto / m - k_i * sigma_to / (2.0 * m * m)
    return remove + add


class ModularityState:
    """Cached quantities for incremental modularity arithmetic.

    m: total edge weight (self-loops once). k[i]: weight attached to node i
    (self-loops twice). sigma[c]: weight attached to cluster c's members
    (intra-cluster edges twice). intra[c]: intra-cluster weight, each edge
    once. k_to_cluster(i, c): weight between i and other members of c.
    """

    def __init__(self, m: float, k: dict[int, float], sigma: dict[int, float],
                 intra: dict[int, float] | None = None,
                 k_to: dict[tuple[int, int], float] | None = None,
                 graph: CutGraph | None = None,
                 assignment: dict[int, int] | None = None):
        self.m = m
        self.k = k
        self.sigma = sigma
        self.intra = intra or {}
        self._k_to = k_to
        self._graph = graph
        self._assignment = assignment

    @classmethod
    def from_clustering(cls, graph: CutGraph, clustering: Clustering) -> "ModularityState":
        m = graph.total_w()
        k: dict[int, float] = {n.id: 0.0 for n in graph.nodes}
        sigma: dict[int, float] = {c: 0.0 for c in clustering.clusters}
        intra: dict[int, float] = {c: 0.0 for c in clustering.clusters}
        for e in graph.edges:
            if e.is_self_loop():
                k[e.u] += 2.0 * e.w
            else:
                k[e.u] += e.w
                k[e.v] += e.w
            cu, cv = clustering.assignment[e.u], clustering.assignment[e.v]
            if cu == cv:
                intra[cu] += e.w
        for n, c in clustering.assignment.items():
            sigma[c] += k[n]
        return cls(m, k, sigma, intra, graph=graph, assignment=clustering.assignment)

    @classmethod
    def from_values(cls, m: float, k: dict[int, float], sigma: dict[int, float],
                    k_to: dict[tuple[int, int], float]) -> "ModularityState":
        return cls(m, k, sigma, k_to=k_to)

    def k_to_cluster(self, i: int, c: int) -> float:
        if self._k_to is not None:
            return self._k_to.get((i, c), 0.0)
        total = 0.0
        for e in self._graph.edges:
            if e.is_self_loop():
                continue
            if e.u == i and self._assignment[e.v] == c:
                total += e.w
            elif e.v == i and self._assignment[e.u] == c:
                total += e.w
        return total


def modularity_gain(state: ModularityState, i: int, c_from: int, c_to: int) -> float:
    """Gain in modularity from moving node ``i`` from ``c_from`` to ``c_to``."""
    return _gain(
        state.m,
        state.k[i],
        state.k_to_cluster(i, c_from),
        state.k_to_cluster(i, c_to),
        state.sigma[c_from],
        state.sigma[c_to],
    )


def modularity(graph: CutGraph, clustering: Clustering) -> float:
    """Modularity of a clustering, evaluated from scratch."""
    state = ModularityState.from_clustering(graph, clustering)
    if state.m <= 0:
        return 0.0
    q = 0.0
    for c in clustering.clusters:
        q += state.intra[c] / state.m - (state.sigma[c] / (2.0 * state.m)) ** 2
    return q


# ---------------------------------------------------------------------------
# move engine internals
# ---------------------------------------------------------------------------

class _LevelState:
    """Mutable clustering bookkeeping for one graph level."""

    def __init__(self, graph: CutGraph, max_qubits: int,
                 assignment: dict[int, int] | None = None):
        self.graph = graph
        self.max_qubits = max_qubits
        n = graph.num_nodes
        self.adj: list[list[tuple[int, float, float]]] = [[] for _ in range(n)]
        self.self_w = [0.0] * n
        self.self_w_hat = [0.0] * n
        for e in graph.edges:
            if e.is_self_loop():
                self.self_w[e.u] += e.w
                self.self_w_hat[e.u] += e.w_hat
            else:
                self.adj[e.u].append((e.v, e.w, e.w_hat))
                self.adj[e.v].append((e.u, e.w, e.w_hat))
        self.k = [2.0 * self.self_w[i] + sum(w for _, w, _ in self.adj[i])
                  for i in range(n)]
        self.node_qubits = [set(node.qubits) for node in graph.nodes]
        for node in graph.nodes:
            if len(node.qubits) > max_qubits:
                raise InfeasibleCapError(
                    f"node {node.id} spans {len(node.qubits)} qubits; cap is {max_qubits}")

        if assignment is None:
            assignment = {i: i for i in range(n)}
        self.cluster_of = [assignment[i] for i in range(n)]
        self.members: dict[int, set[int]] = {}
        self.qubit_count: dict[int, Counter] = {}
        for i in range(n):
            c = self.cluster_of[i]
            self.members.setdefault(c, set()).add(i)
            self.qubit_count.setdefault(c, Counter()).update(self.node_qubits[i])

    # -- shared helpers ------------------------------------------------------

    def neighbor_weights(self, i: int) -> tuple[dict[int, float], dict[int, float]]:
        nb_w: dict[int, float] = {}
        nb_hat: dict[int, float] = {}
        for j, w, w_hat in self.adj[i]:
            c = self.cluster_of[j]
            nb_w[c] = nb_w.get(c, 0.0) + w
            nb_hat[c] = nb_hat.get(c, 0.0) + w_hat
        return nb_w, nb_hat

    def feasible(self, i: int, c_to: int) -> bool:
        target = self.qubit_count[c_to]
        extra = sum(1 for q in self.node_qubits[i] if q not in target)
        return len(target) + extra <= self.max_qubits

    def relocate(self, i: int, c_from: int, c_to: int) -> bool:
        """Move i between clusters; returns True if the source emptied."""
        self.members[c_from].discard(i)
        self.qubit_count[c_from].subtract(self.node_qubits[i])
        self.qubit_count[c_from] += Counter()  # drop zero counts
        self.members[c_to].add(i)
        self.qubit_count[c_to].update(self.node_qubits[i])
        self.cluster_of[i] = c_to
        if not self.members[c_from]:
            del self.members[c_from]
            del self.qubit_count[c_from]
            return True
        return False

    def assignment(self) -> dict[int, int]:
        return {i: c for i, c in enumerate(self.cluster_of)}

    def visit_order(self, order: str, rng: np.random.Generator | None) -> list[int]:
        n = self.graph.num_nodes
        if order == "random":
            if rng is None:
                rng = np.random.default_rng(0)
            return [int(i) for i in rng.permutation(n)]
        return sorted(range(n), key=lambda i: (-self.k[i], i))


@dataclass
class StageStats:
    moves: int = 0
    passes: int = 0
    gain_evals: int = 0
    lq_trace: list[float] = field(default_factory=list)

    def merge(self, other: "StageStats") -> None:
        self.moves += other.moves
        self.passes += other.passes
        self.gain_evals += other.gain_evals
        self.lq_trace.extend(other.lq_trace)


class _ModularityEngine(_LevelState):
    """Stage-1 local move rule: accept the best strictly positive gain."""

    def __init__(self, graph, max_qubits, audit=False):
        super().__init__(graph, max_qubits)
        self.audit = audit
        self.m = graph.total_w()
        self.sigma = {c: sum(self.k[i] for i in nodes) for c, nodes in self.members.items()}
        self.stats = StageStats()
        self._audit_q = None

    def sweep(self, visit: list[int]) -> int:
        moves = 0
        for i in visit:
            nb_w, _ = self.neighbor_weights(i)
            c_from = self.cluster_of[i]
            k_i = self.k[i]
            k_i_cfrom = nb_w.get(c_from, 0.0)
            remove = -k_i_cfrom / self.m + k_i * (self.sigma[c_from] - k_i) / (2.0 * self.m * self.m)
            best_gain = 0.0
            best = c_from
            for c_to in sorted(nb_w):
                if c_to == c_from:
                    continue
                if not self.feasible(i, c_to):
                    continue
                self.stats.gain_evals += 1
                gain = remove + nb_w[c_to] / self.m - k_i * self.sigma[c_to] / (2.0 * self.m * self.m)
                if gain > best_gain + EPS:
                    best_gain = gain
                    best = c_to
            if best != c_from:
                self.sigma[c_from] -= k_i
                self.sigma[best] += k_i
                if self.relocate(i, c_from, best):
                    del self.sigma[c_from]
                moves += 1
                if self.audit:
                    self._check_state()
        self.stats.moves += moves
        return moves

    def _check_state(self) -> None:
        clustering = Clustering.from_assignment(self.graph, self.assignment(),
                                                self.max_qubits)
        clustering.validate(self.graph)
        fresh = ModularityState.from_clustering(self.graph, clustering)
        for c, sig in self.sigma.items():
            assert abs(sig - fresh.sigma[c]) < 1e-6, f"sigma drift on cluster {c}"
            # attached weight decomposes into twice-intra plus boundary
            boundary = sig - 2.0 * fresh.intra[c]
            direct = sum(
                e.w for e in self.graph.edges
                if not e.is_self_loop()
                and (clustering.assignment[e.u] == c) != (clustering.assignment[e.v] == c)
            )
            assert abs(boundary - direct) < 1e-6, f"boundary drift on cluster {c}"
        q = modularity(self.graph, clustering)
        if self._audit_q is not None:
            # accepted gains exceed EPS, so the recomputed Q must move up
            assert q > self._audit_q + 1e-10, "accepted move failed to raise Q"
        self._audit_q = q


class _LogOverheadEngine(_LevelState):
    """Stage-2 move rule: accept moves that lower (or tie with less cut
    weight) the running worst-cluster log overhead."""

    def __init__(self, graph, max_qubits, assignment=None, audit=False):
        super().__init__(graph, max_qubits, assignment)
        self.audit = audit
        self.s_w: dict[int, float] = {c: 0.0 for c in self.members}
        self.s_hat: dict[int, float] = {c: 0.0 for c in self.members}
        self.w_cut = 0.0
        self.hat_cut = 0.0
        for e in graph.edges:
            if e.is_self_loop():
                continue
            cu, cv = self.cluster_of[e.u], self.cluster_of[e.v]
            if cu != cv:
                self.s_w[cu] += e.w
                self.s_w[cv] += e.w
                self.s_hat[cu] += e.w_hat
                self.s_hat[cv] += e.w_hat
                self.w_cut += e.w
                self.hat_cut += e.w_hat
        self.stats = StageStats()

    @property
    def r(self) -> int:
        return len(self.members)

    def log_overhead(self, c: int) -> float:
        return math.log(self.r) + self.s_w[c] + (self.hat_cut - self.s_hat[c])

    def worst(self) -> float:
        if not self.members:
            return 0.0
        return max(self.log_overhead(c) for c in self.members)

    def sweep(self, visit: list[int], lq: float) -> tuple[int, float]:
        moves = 0
        for i in visit:
            c_from = self.cluster_of[i]
            nb_w, nb_hat = self.neighbor_weights(i)
            kout_w = sum(w for c, w in nb_w.items() if c != c_from)
            kout_hat = sum(w for c, w in nb_hat.items() if c != c_from)
            in_w = nb_w.get(c_from, 0.0)
            in_hat = nb_hat.get(c_from, 0.0)
            singleton = len(self.members[c_from]) == 1
            best = c_from
            r = self.r
            for c_to in sorted(nb_w):
                if c_to == c_from:
                    continue
                if not self.feasible(i, c_to):
                    continue
                self.stats.gain_evals += 1
                hat_cut_after = self.hat_cut + in_hat - nb_hat.get(c_to, 0.0)
                if not singleton:
                    # source cluster must not become the new bottleneck
                    sw_src = self.s_w[c_from] - kout_w + in_w
                    shat_src = self.s_hat[c_from] - kout_hat + in_hat
                    src = math.log(r) + sw_src + (hat_cut_after - shat_src)
                    if src > lq + EPS:
                        continue
                r_after = r - 1 if singleton else r
                sw_dst = self.s_w[c_to] - 2.0 * nb_w.get(c_to, 0.0) + kout_w + in_w
                shat_dst = self.s_hat[c_to] - 2.0 * nb_hat.get(c_to, 0.0) + kout_hat + in_hat
                dst = math.log(r_after) + sw_dst + (hat_cut_after - shat_dst)
                dw = in_w - nb_w.get(c_to, 0.0)
                if dst < lq - EPS:
                    lq = dst
                    best = c_to
                elif abs(dst - lq) <= EPS and dw < -EPS:
                    best = c_to
            if best != c_from:
                self._apply_move(i, c_from, best, nb_w, nb_hat)
                moves += 1
                if self.audit:
                    self._check_state()
        self.stats.moves += moves
        return moves, lq

    def _apply_move(self, i, c_from, c_to, nb_w, nb_hat) -> None:
        kout_w = sum(w for c, w in nb_w.items() if c != c_from)
        kout_hat = sum(w for c, w in nb_hat.items() if c != c_from)
        in_w = nb_w.get(c_from, 0.0)
        in_hat = nb_hat.get(c_from, 0.0)
        to_w = nb_w.get(c_to, 0.0)
        to_hat = nb_hat.get(c_to, 0.0)
        self.s_w[c_from] += in_w - kout_w
        self.s_hat[c_from] += in_hat - kout_hat
        self.s_w[c_to] += kout_w + in_w - 2.0 * to_w
        self.s_hat[c_to] += kout_hat + in_hat - 2.0 * to_hat
        self.w_cut += in_w - to_w
        self.hat_cut += in_hat - to_hat
        if self.relocate(i, c_from, c_to):
            del self.s_w[c_from]
            del self.s_hat[c_from]

    def _check_state(self) -> None:
        clustering = Clustering.from_assignment(self.graph, self.assignment(),
                                                self.max_qubits)
        clustering.validate(self.graph)
        fresh = _LogOverheadEngine(self.graph, self.max_qubits, self.assignment())
        assert abs(self.w_cut - fresh.w_cut) < 1e-6
        assert abs(self.hat_cut - fresh.hat_cut) < 1e-6
        for c in self.members:
            assert abs(self.s_w[c] - fresh.s_w[c]) < 1e-6, f"cut sum drift on {c}"
            assert abs(self.s_hat[c] - fresh.s_hat[c]) < 1e-6


# ---------------------------------------------------------------------------
# multi-level drivers
# ---------------------------------------------------------------------------

def _compose(node_map: list[int], cluster_of: list[int]) -> dict[int, int]:
    return {orig: cluster_of[current] for orig, current in enumerate(node_map)}


def _run_levels(graph: CutGraph, max_qubits: int, engine_cls, order: str,
                rng: np.random.Generator | None, audit: bool,
                initial: Clustering | None = None):
    """Repeat (local moves until stable, then contract) until a level is quiet."""
    node_map = list(range(graph.num_nodes))
    level_graph = graph
    init_assignment = None if initial is None else dict(initial.assignment)
    stats = StageStats()
    is_lq = engine_cls is _LogOverheadEngine

    while True:
        if is_lq:
            engine = engine_cls(level_graph, max_qubits, init_assignment, audit=audit)
        else:
            engine = engine_cls(level_graph, max_qubits, audit=audit)
        init_assignment = None
        stats.passes += 1
        level_moves = 0
        if is_lq:
            lq = engine.worst()
            stats.lq_trace.append(lq)
            while True:
                moved, lq = engine.sweep(engine.visit_order(order, rng), lq)
                level_moves += moved
                if moved == 0:
                    break
        else:
            while True:
                moved = engine.sweep(engine.visit_order(order, rng))
                level_moves += moved
                if moved == 0:
                    break
        stats.merge(engine.stats)
        assignment = _compose(node_map, engine.cluster_of)
        clustering = Clustering.from_assignment(graph, assignment, max_qubits)
        if level_moves == 0:
            return clustering, stats
        level = Clustering.from_assignment(level_graph, engine.assignment(), max_qubits)
        contracted = contract(level_graph, level)
        remap = {}
        for node in contracted.nodes:
            for member in node.members:
                remap[member] = node.id
        node_map = [remap[cur] for cur in node_map]
        level_graph = contracted


def step1_modularity(graph: CutGraph, max_qubits: int, order: str = "weighted",
                     rng: np.random.Generator | None = None,
                     audit: bool = False) -> Clustering:
    """Qubit-capped modularity clustering (stage 1)."""
    clustering, _ = _step1_with_stats(graph, max_qubits, order, rng, audit)
    return clustering


def _step1_with_stats(graph, max_qubits, order="weighted", rng=None, audit=False):
    if graph.num_nodes == 0:
        return Clustering({}, {}, max_qubits), StageStats()
    if graph.total_w() <= 0:
        return Clustering.singletons(graph, max_qubits), StageStats()
    return _run_levels(graph, max_qubits, _ModularityEngine, order, rng, audit)


def step2_lq_min(graph: CutGraph, max_qubits: int, order: str = "weighted",
                 rng: np.random.Generator | None = None,
                 initial: Clustering | None = None,
                 audit: bool = False) -> Clustering:
    """Worst-overhead minimization clustering (stage 2).

    Starts from singleton clusters of the given (typically contracted) graph,
    or from ``initial`` when provided. The result never has a higher worst
    log overhead than its starting point.
    """
    clustering, _ = _step2_with_stats(graph, max_qubits, order, rng, initial, audit)
    return clustering


def _step2_with_stats(graph, max_qubits, order="weighted", rng=None, initial=None,
                      audit=False):
    from .overhead import max_log_overhead

    if graph.num_nodes == 0:
        return Clustering({}, {}, max_qubits), StageStats()
    start = initial if initial is not None else Clustering.singletons(graph, max_qubits)
    clustering, stats = _run_levels(graph, max_qubits, _LogOverheadEngine, order, rng,
                                    audit, initial=start)
    # moves are only accepted against the running bound, yet a move can shift
    # the residual w_hat cost of untouched clusters; keep the start if that
    # pathological drift ever makes things worse
    if max_log_overhead(clustering, graph) > max_log_overhead(start, graph) + EPS:
        return start, stats
    return clustering, stats


# ---------------------------------------------------------------------------
# pipeline
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class StageMetrics:
    stage: str
    lq: float
    ld: float
    r: int
    moves: int
    passes: int
    wall_time_s: float
    gain_evals: int
    lq_trace: tuple[float, ...] = ()

    def to_json_dict(self) -> dict:
        return {
            "stage": self.stage,
            "lq": self.lq,
            "ld": self.ld,
            "r": self.r,
            "moves": self.moves,
            "passes": self.passes,
            "wall_time_s": round(self.wall_time_s, 4),
        }


@dataclass(frozen=True)
class PipelineResult:
    clustering: Clustering
    stages: tuple[StageMetrics, ...]

    @property
    def lq(self) -> float:
        return self.stages[-1].lq

    @property
    def r(self) -> int:
        return self.stages[-1].r


def run_pipeline(graph: CutGraph, max_qubits: int, order: str = "weighted",
                 restarts: int = 1, seed: int | None = None,
                 audit: bool = False) -> PipelineResult:
    """Full partitioner: stage 1, contraction, stage 2, atomic refinement.

    The supernode merging of stage 2 cannot split stage-1 clusters, so a final
    stage-2 refinement at single-node granularity polishes the boundary. With
    ``order="random"`` the best of ``restarts`` runs (by final worst overhead)
    is returned; the weighted order is deterministic and runs once.
    """
    if order not in ("weighted", "random"):
        raise ValueError(f"unknown order policy '{order}'")
    if restarts < 1:
        raise ValueError("restarts must be >= 1")
    runs = restarts if order == "random" else 1
    seeds = np.random.SeedSequence(seed).spawn(runs)
    best: PipelineResult | None = None
    for seq in seeds:
        rng = np.random.default_rng(seq) if order == "random" else None
        result = _pipeline_once(graph, max_qubits, order, rng, audit)
        if best is None or result.lq < best.lq - EPS:
            best = result
    return best


def _pipeline_once(graph, max_qubits, order, rng, audit) -> PipelineResult:
    t0 = time.perf_counter()
    c1, st1 = _step1_with_stats(graph, max_qubits, order, rng, audit)
    t1 = time.perf_counter()

    if graph.num_nodes:
        contracted = contract(graph, c1)
        c2_super, st2 = _step2_with_stats(contracted, max_qubits, order, rng, audit=audit)
        atomic_assignment = {}
        for node in contracted.nodes:
            target = c2_super.assignment[node.id]
            for member in node.members:
                atomic_assignment[member] = target
        merged = Clustering.from_assignment(graph, atomic_assignment, max_qubits)
        c2, st2b = _step2_with_stats(graph, max_qubits, order, rng, initial=merged,
                                     audit=audit)
        st2.merge(st2b)
    else:
        c2, st2 = c1, StageStats()
    t2 = time.perf_counter()

    c2 = c2.compacted()
    stages = (
        _stage_metrics("step1", graph, c1, st1, t1 - t0),
        _stage_metrics("step2", graph, c2, st2, t2 - t1),
    )
    return PipelineResult(clustering=c2, stages=stages)


def _stage_metrics(name, graph, clustering, stats: StageStats, elapsed) -> StageMetrics:
    from . import overhead

    summary = overhead.cut_summary(graph, clustering)
    return StageMetrics(
        stage=name,
        lq=summary.max_log_overhead(),
        ld=summary.heavy_cluster_cut_weight(),
        r=max(summary.r, 1),  # a circuit with nothing to cut is one partition
        moves=stats.moves,
        passes=stats.passes,
        wall_time_s=elapsed,
        gain_evals=stats.gain_evals,
        lq_trace=tuple(stats.lq_trace),
    )
