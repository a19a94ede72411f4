"""Sampling-overhead arithmetic and reporting.

A clustering of the cut graph induces a cut set: every edge whose endpoints
live in different clusters. For cluster c, with E_c the cut edges attached to
c and D_c the remaining cut edges,

    overhead(c) = R * (prod_{j in E_c} kappa_j)^2 * prod_{k in D_c} tau_k

drives the number of shots partition c needs so that the reconstructed
expectation value keeps a standard deviation below eps:

    shots(c) = ceil(overhead(c) / eps^2)

The log of the worst overhead (report key ``lq``) is the partitioner's
objective; ``ld`` is the attached-cut weight of that worst cluster. Two older
bounds are provided for comparison: a Hoeffding-style budget paid once per
partition, and the cubic bound for measure-and-prepare cutting.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import TYPE_CHECKING

from .graph import CutGraph, CutKind

if TYPE_CHECKING:  # pragma: no cover
    from .clustering import Clustering

LN9 = math.log(9.0)
LN16 = math.log(16.0)


@dataclass(frozen=True)
class CutSummary:
    """Cut-set aggregates of one clustering."""

    r: int
    cut_edges: tuple[int, ...]                 # edge indices, endpoints in two clusters
    s_w: dict[int, float]                      # per cluster: attached cut w sum
    s_hat: dict[int, float]                    # per cluster: attached cut w_hat sum
    attached_kappa_sq: dict[int, float]        # per cluster: (prod kappa)^2 over E_c
    attached_tau: dict[int, float]             # per cluster: prod tau over E_c
    w_cut: float
    hat_cut: float
    tau_cut: float                             # prod tau over all cut edges

    def log_overhead(self, c: int) -> float:
        return math.log(self.r) + self.s_w[c] + (self.hat_cut - self.s_hat[c])

    def overhead(self, c: int) -> float:
        """Linear-space overhead factor of cluster c (exact for integer factors)."""
        return self.r * self.attached_kappa_sq[c] * (self.tau_cut / self.attached_tau[c])

    def max_log_overhead(self) -> float:
        if self.r == 0:
            return 0.0
        return max(self.log_overhead(c) for c in self.s_w)

    def heavy_cluster(self) -> int | None:
        """Cluster attaining the worst log overhead; ties go to the lowest id."""
        if self.r == 0:
            return None
        return min(self.s_w, key=lambda c: (-self.log_overhead(c), c))

    def heavy_cluster_cut_weight(self) -> float:
        c = self.heavy_cluster()
        return 0.0 if c is None else self.s_w[c]


def cut_summary(graph: CutGraph, clustering: "Clustering") -> CutSummary:
    s_w = {c: 0.0 for c in clustering.clusters}
    s_hat = {c: 0.0 for c in clustering.clusters}
    kappa_sq = {c: 1.0 for c in clustering.clusters}
    attached_tau = {c: 1.0 for c in clustering.clusters}
    cut_edges = []
    w_cut = 0.0
    hat_cut = 0.0
    tau_cut = 1.0
    for idx, e in enumerate(graph.edges):
        if e.is_self_loop():
            continue
        cu = clustering.assignment[e.u]
        cv = clustering.assignment[e.v]
        if cu == cv:
            continue
        cut_edges.append(idx)
        w_cut += e.w
        hat_cut += e.w_hat
        tau_cut *= e.tau
        for c in (cu, cv):
            s_w[c] += e.w
            s_hat[c] += e.w_hat
            kappa_sq[c] *= e.kappa ** 2
            attached_tau[c] *= e.tau
    return CutSummary(
        r=len(clustering.clusters),
        cut_edges=tuple(cut_edges),
        s_w=s_w,
        s_hat=s_hat,
        attached_kappa_sq=kappa_sq,
        attached_tau=attached_tau,
        w_cut=w_cut,
        hat_cut=hat_cut,
        tau_cut=tau_cut,
    )


def cluster_log_overhead(clustering: "Clustering", graph: CutGraph, c: int) -> float:
    """ln of cluster c's overhead factor: ln R + S_w(c) + (hat_cut - S_hat(c))."""
    return cut_summary(graph, clustering).log_overhead(c)


def max_log_overhead(clustering: "Clustering", graph: CutGraph) -> float:
    """The partitioning objective: the worst cluster's log overhead."""
    return cut_summary(graph, clustering).max_log_overhead()


def shot_budget(clustering: "Clustering", graph: CutGraph, eps: float) -> dict:
    """Per-cluster shot counts for a target standard deviation ``eps``.

    Shots are computed in linear space from the exact kappa/tau factors and
    rounded up, so integer-valued budgets come out exact.
    """
    if eps <= 0:
        raise ValueError("eps must be positive")
    summary = cut_summary(graph, clustering)
    n_c = {}
    for c in sorted(clustering.clusters):
        n_c[c] = math.ceil(summary.overhead(c) / eps ** 2)
    return {"n_c": n_c, "n_total": sum(n_c.values())}


def prior_bound(cut_kappas: list[float], eps: float, delta: float = 1.0 / 3.0,
                r: int = 1) -> int:
    """Hoeffding-style budget: every partition pays for every cut.

    The per-partition bound 2*(prod kappa)^2*ln(2/delta)/eps^2 is charged once
    per partition; the total is rounded up once at the end.
    """
    if eps <= 0 or not 0 < delta < 1:
        raise ValueError("need eps > 0 and 0 < delta < 1")
    prod = 1.0
    for kappa in cut_kappas:
        prod *= kappa
    per_partition = 2.0 * prod ** 2 * math.log(2.0 / delta) / eps ** 2
    return math.ceil(r * per_partition)


def cubic_bound(r: int, d_prime: int, eps: float = 1.0) -> float:
    """Cubic measure-and-prepare bound, with d_prime the largest number of
    wire cuts on any single partition."""
    if d_prime < 0:
        raise ValueError("d_prime must be >= 0")
    m = r * 8 ** d_prime
    return 2.0 * (math.e - 1.0) ** 2 * m ** 3 * math.log(6.0 * m) / eps ** 2


def segment_flags(graph: CutGraph, clustering: "Clustering") -> tuple[int, ...]:
    """Clusters whose wire-segment count exceeds their qubit-union size.

    A time-like cut can split one wire into several segments owned by the same
    cluster; counting segments instead of distinct qubits would then demand
    more device qubits than the union rule reports. Only meaningful for atomic
    graphs (each node on one wire); returns () otherwise.
    """
    if any(n.gate_id is None for n in graph.nodes):
        return ()
    wires: dict[int, list[int]] = {}
    for node in graph.nodes:  # node ids are in gate order, which is time order
        (q,) = node.qubits
        wires.setdefault(q, []).append(node.id)
    segments: dict[int, int] = {c: 0 for c in clustering.clusters}
    for q, nodes in wires.items():
        previous = None
        for n in nodes:
            c = clustering.assignment[n]
            if c != previous:
                segments[c] += 1
                previous = c
    flagged = [c for c, count in segments.items()
               if count > len(clustering.clusters[c].qubits)]
    return tuple(sorted(flagged))


@dataclass(frozen=True)
class OverheadReport:
    ln_i_c: dict[int, float]
    lq: float
    ld: float
    heavy_cluster: int | None
    n_space: int
    n_time: int
    n_tot_space: int
    n_tot_time: int
    l_tot: float
    r: int
    eps: float | None = None
    n_c: dict[int, int] | None = None
    n_total: int | None = None
    flagged_clusters: tuple[int, ...] = ()

    def to_json_dict(self) -> dict:
        return {
            "lq": self.lq,
            "ld": self.ld,
            "r": self.r,
            "n_space": self.n_space,
            "n_time": self.n_time,
            "l_tot": self.l_tot,
            "n_c": None if self.n_c is None else [self.n_c[c] for c in sorted(self.n_c)],
            "n_total": self.n_total,
            "eps": self.eps,
            "ln_i_c": {str(c): v for c, v in sorted(self.ln_i_c.items())},
            "lq_log10": self.lq / math.log(10.0),
            "ld_log10": self.ld / math.log(10.0),
            "n_tot_space": self.n_tot_space,
            "n_tot_time": self.n_tot_time,
            "flagged_clusters": list(self.flagged_clusters),
        }

    def csv_row(self, name: str, wall_time_s: float | None = None,
                error: str = "") -> str:
        time_field = "" if wall_time_s is None else f"{wall_time_s:.4f}"
        return (f"{name},{self.lq:.6f},{self.n_space},{self.n_time},"
                f"{self.l_tot:.6f},{self.r},{time_field},{error}")


BENCH_CSV_HEADER = "name,lq,n_space,n_time,l_tot,r,wall_time_s,error"


def build_report(clustering: "Clustering", graph: CutGraph,
                 eps: float | None = None) -> OverheadReport:
    """Assemble the full overhead report for a clustering.

    Space/time edge counts rely on atomic edge kinds; merged edges (from
    contracted graphs) contribute to the weights but to neither count.
    """
    summary = cut_summary(graph, clustering)
    ln_i = {c: summary.log_overhead(c) for c in clustering.clusters}
    heavy = summary.heavy_cluster()
    n_space = n_time = n_tot_space = n_tot_time = 0
    l_tot = 0.0
    for idx in summary.cut_edges:
        e = graph.edges[idx]
        l_tot += e.w
        attached_to_heavy = heavy is not None and heavy in (
            clustering.assignment[e.u], clustering.assignment[e.v])
        if e.kind is CutKind.SPACE:
            n_tot_space += 1
            n_space += attached_to_heavy
        elif e.kind is CutKind.TIME:
            n_tot_time += 1
            n_time += attached_to_heavy
    budget = shot_budget(clustering, graph, eps) if eps is not None else None
    return OverheadReport(
        ln_i_c=ln_i,
        lq=summary.max_log_overhead(),
        ld=summary.heavy_cluster_cut_weight(),
        heavy_cluster=heavy,
        n_space=n_space,
        n_time=n_time,
        n_tot_space=n_tot_space,
        n_tot_time=n_tot_time,
        l_tot=l_tot,
        r=max(summary.r, 1),
        eps=eps,
        n_c=None if budget is None else budget["n_c"],
        n_total=None if budget is None else budget["n_total"],
        flagged_clusters=segment_flags(graph, clustering),
    )
