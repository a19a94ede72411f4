"""Monte-Carlo circuit-cutting estimator.

Cutting a set of gates and wires splits the circuit into independent
subcircuits. Each cut contributes a sum of signed local terms; picking one
term per cut selects a *variant* of every subcircuit it touches. The
estimator:

1. partitions the circuit and rejects cut sets that fail to disconnect it,
2. budgets shots per partition as N_c = ceil(R * (prod_{E_c} kappa)^2 *
   prod_{D_c} tau / eps^2), where E_c are the cuts touching partition c and
   D_c the rest,
3. splits N_c across partition variants proportionally to the product of
   |coefficient| / kappa of the selected terms,
4. samples every (partition, variant) independently: the variant's exact
   outcome distribution is enumerated (signed mid-circuit measurements fork
   the statevector into branches) and the requested number of shots is drawn
   from it in one multinomial, so the sample mean has exactly the per-shot
   sampling law,
5. combines the per-variant sample means with the term coefficients, summing
   the coefficient-weighted product of partition means over all term choices.

With that budget the estimator is unbiased and its standard deviation stays
below eps.
"""

from __future__ import annotations

import math
import string
from dataclasses import dataclass, field

import numpy as np

from ..qasm import CircuitIR
from .decomp import (DecompositionSpec, MEAS_SIGNED, gate_cut_decomposition,
                     wire_cut_decomposition)
from .observable import ObsFactor, ProductObservable, value_table
from ..qasm import GateApp
from .statevector import apply_gate, basis_bits, zero_state


class NotDisconnectedError(Exception):
    """The requested cuts do not split the circuit into >= 2 partitions."""


class IncompatibleObservableError(Exception):
    """An observable factor straddles a partition boundary."""


@dataclass(frozen=True)
class GateCut:
    """Cut the 2-qubit gate at this index (space-like)."""

    gate_index: int


@dataclass(frozen=True)
class WireCut:
    """Cut wire ``qubit`` right after the gate at ``after_gate`` (time-like)."""

    qubit: int
    after_gate: int


@dataclass(frozen=True)
class ShotAllocation:
    n_c: dict[int, int]
    variants: dict[int, dict[tuple[int, ...], int]]

    @property
    def n_total(self) -> int:
        return sum(self.n_c.values())


@dataclass(frozen=True)
class EstimatorRun:
    estimate: float
    variant_means: dict[int, dict[tuple[int, ...], float]]
    allocation: ShotAllocation
    r: int
    seed: int

    @property
    def shots_used(self) -> int:
        return self.allocation.n_total


# -- partitioning ------------------------------------------------------------

class _UnionFind:
    def __init__(self):
        self.parent: dict = {}

    def add(self, x) -> None:
        self.parent.setdefault(x, x)

    def find(self, x):
        root = x
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[x] != root:
            self.parent[x], x = root, self.parent[x]
        return root

    def union(self, a, b) -> None:
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            self.parent[max(ra, rb)] = min(ra, rb)


@dataclass
class PartitionPlan:
    """Everything the sampler needs about one subcircuit."""

    num_qubits: int = 0
    #: time-ordered items: ("gate", GateApp, local qubits) or
    #: ("cut", cut index, side, local qubit)
    items: list = field(default_factory=list)
    factors: list[ObsFactor] = field(default_factory=list)
    attached_cuts: list[int] = field(default_factory=list)


def _check_cuts(circuit: CircuitIR, cuts: list) -> None:
    seen = set()
    for cut in cuts:
        if isinstance(cut, GateCut):
            if not 0 <= cut.gate_index < len(circuit.gates):
                raise ValueError(f"gate index {cut.gate_index} out of range")
            if len(circuit.gates[cut.gate_index].qubits) != 2:
                raise ValueError(f"gate {cut.gate_index} is not a 2-qubit gate")
        elif isinstance(cut, WireCut):
            if not 0 <= cut.after_gate < len(circuit.gates):
                raise ValueError(f"gate index {cut.after_gate} out of range")
            if cut.qubit not in circuit.gates[cut.after_gate].qubits:
                raise ValueError(
                    f"gate {cut.after_gate} does not touch wire {cut.qubit}")
        else:
            raise TypeError(f"unknown cut placement {cut!r}")
        if cut in seen:
            raise ValueError(f"duplicate cut {cut!r}")
        seen.add(cut)


def plan_partitions(circuit: CircuitIR, cuts: list,
                    obs: ProductObservable) -> tuple[dict[int, PartitionPlan], int]:
    """Split the circuit along the cuts; returns per-partition plans and R.

    Wires are tracked as segments: a wire cut ends the current segment and
    starts a fresh one. Partitions are the connected components of segments
    under the remaining (uncut) 2-qubit gates; every cut must end up between
    two different partitions.
    """
    _check_cuts(circuit, cuts)
    gate_cuts = {c.gate_index: j for j, c in enumerate(cuts) if isinstance(c, GateCut)}
    wire_cuts: dict[int, list[tuple[int, int]]] = {}
    for j, c in enumerate(cuts):
        if isinstance(c, WireCut):
            wire_cuts.setdefault(c.after_gate, []).append((c.qubit, j))

    uf = _UnionFind()
    segment: dict[int, tuple[int, int]] = {}
    birth_order: list[tuple[int, int]] = []
    for q in range(circuit.num_qubits):
        segment[q] = (q, 0)
        uf.add((q, 0))
        birth_order.append((q, 0))

    # raw items carry the segments they act on, in creation order
    raw: list[tuple[tuple, tuple, tuple]] = []
    cut_sides: dict[int, list] = {j: [None, None] for j in range(len(cuts))}

    for g, gate in enumerate(circuit.gates):
        segs = tuple(segment[q] for q in gate.qubits)
        if g in gate_cuts and len(gate.qubits) == 2:
            j = gate_cuts[g]
            for side, seg in enumerate(segs):
                cut_sides[j][side] = seg
                raw.append(((g, 0, side), (seg,), ("cut", j, side)))
        else:
            if len(gate.qubits) == 2:
                uf.union(segs[0], segs[1])
            raw.append(((g, 0, 0), segs, ("gate", gate)))
        for q, j in wire_cuts.get(g, ()):
            old = segment[q]
            new = (q, old[1] + 1)
            uf.add(new)
            birth_order.append(new)
            segment[q] = new
            cut_sides[j][0] = old
            cut_sides[j][1] = new
            raw.append(((g, 1, j), (old,), ("cut", j, 0)))
            raw.append(((g, 2, j), (new,), ("cut", j, 1)))

    roots = sorted({uf.find(s) for s in uf.parent})
    if len(roots) < 2:
        raise NotDisconnectedError(
            f"cuts leave the circuit in {len(roots)} component(s); need >= 2")
    for j, (a, b) in cut_sides.items():
        if uf.find(a) == uf.find(b):
            raise NotDisconnectedError(
                f"cut {j} ({cuts[j]!r}) joins segments of the same partition")

    part_of_root = {root: c for c, root in enumerate(roots)}
    plans = {c: PartitionPlan() for c in part_of_root.values()}
    local: dict[tuple[int, int], tuple[int, int]] = {}  # segment -> (partition, qubit)
    for seg in birth_order:
        c = part_of_root[uf.find(seg)]
        local[seg] = (c, plans[c].num_qubits)
        plans[c].num_qubits += 1

    for _, segs, payload in sorted(raw, key=lambda item: item[0]):
        c = local[segs[0]][0]
        if payload[0] == "gate":
            locals_ = tuple(local[s][1] for s in segs)
            plans[c].items.append(("gate", payload[1], locals_))
        else:
            _, j, side = payload
            plans[c].items.append(("cut", j, side, local[segs[0]][1]))
            if j not in plans[c].attached_cuts:
                plans[c].attached_cuts.append(j)
    for c in plans:
        plans[c].attached_cuts.sort()

    # observable factors follow the final segment of each wire
    final_local = {q: local[segment[q]] for q in range(circuit.num_qubits)}
    for factor in obs.factors:
        parts = {final_local[q][0] for q in factor.qubits}
        if len(parts) > 1:
            raise IncompatibleObservableError(
                f"factor on qubits {factor.qubits} spans partitions {sorted(parts)}")
        c = parts.pop()
        plans[c].factors.append(
            ObsFactor(tuple(final_local[q][1] for q in factor.qubits), factor.table))
    return plans, len(roots)


def cut_specs(circuit: CircuitIR, cuts: list) -> list[DecompositionSpec]:
    specs = []
    for cut in cuts:
        if isinstance(cut, GateCut):
            specs.append(gate_cut_decomposition(circuit.gates[cut.gate_index]))
        else:
            specs.append(wire_cut_decomposition())
    return specs


# -- shot allocation ----------------------------------------------------------

def allocate_shots(plans: dict[int, PartitionPlan], specs: list[DecompositionSpec],
                   r: int, eps: float) -> ShotAllocation:
    """Partition budgets and their proportional split across variants.

    Variant weights are prod |a_j(i_j)| / kappa_j over the attached cuts;
    counts are floored and the remainder goes to the largest fractional
    parts, so each partition's counts sum to N_c exactly. Variants with a
    nonzero weight are guaranteed at least one shot (N_c is raised when
    needed).
    """
    if eps <= 0:
        raise ValueError("eps must be positive")
    n_c: dict[int, int] = {}
    variant_counts: dict[int, dict[tuple[int, ...], int]] = {}
    for c, plan in sorted(plans.items()):
        overhead = float(r)
        for j, spec in enumerate(specs):
            if j in plan.attached_cuts:
                overhead *= spec.kappa ** 2
            else:
                overhead *= spec.tau
        budget = math.ceil(overhead / eps ** 2)

        attached = plan.attached_cuts
        shapes = [len(specs[j].terms) for j in attached]
        weights = []
        variants = []
        for combo in _index_product(shapes):
            weight = 1.0
            for j, term_idx in zip(attached, combo):
                spec = specs[j]
                weight *= abs(spec.terms[term_idx].coeff) / spec.kappa
            variants.append(combo)
            weights.append(weight)
        nonzero = sum(1 for w in weights if w > 0.0)
        budget = max(budget, nonzero)
        counts = _largest_remainder(budget, weights)
        # every weighted variant must contribute a sample mean
        zero_idx = [k for k, (w, n) in enumerate(zip(weights, counts)) if w > 0 and n == 0]
        for k in zero_idx:
            donor = int(np.argmax(counts))
            counts[donor] -= 1
            counts[k] += 1
        n_c[c] = budget
        variant_counts[c] = dict(zip(variants, counts))
    return ShotAllocation(n_c=n_c, variants=variant_counts)


def _index_product(shapes: list[int]):
    if not shapes:
        yield ()
        return
    head, *tail = shapes
    for i in range(head):
        for rest in _index_product(tail):
            yield (i,) + rest


def _largest_remainder(total: int, weights: list[float]) -> list[int]:
    scale = sum(weights)
    shares = [total * w / scale for w in weights]
    counts = [int(math.floor(s)) for s in shares]
    leftover = total - sum(counts)
    order = sorted(range(len(weights)), key=lambda k: (counts[k] - shares[k], k))
    for k in order[:leftover]:
        counts[k] += 1
    return counts


# -- per-variant sampling ------------------------------------------------------

def _variant_ops(plan: PartitionPlan, specs: list[DecompositionSpec],
                 choice: dict[int, int]) -> list:
    """Expand cut sites for one variant into concrete gate/measure ops."""
    ops = []
    for item in plan.items:
        if item[0] == "gate":
            _, gate, locals_ = item
            ops.append(("gate", GateApp(gate.kind, locals_, gate.params)))
        else:
            _, j, side, lq = item
            term = specs[j].terms[choice[j]]
            ts = term.sides[side]
            for kind, params in ts.gates:
                ops.append(("gate", GateApp(kind, (lq,), params)))
            if ts.measure is not None:
                ops.append(("measure", lq, ts.measure == MEAS_SIGNED))
            for kind, params in ts.post_gates:
                ops.append(("gate", GateApp(kind, (lq,), params)))
    return ops


def variant_distribution(plan: PartitionPlan, specs: list[DecompositionSpec],
                         choice: dict[int, int],
                         values: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Exact (probabilities, signed postprocessing values) of one variant.

    Signed measurements fork the state into an unnormalised projected branch
    per outcome; branch norms carry the outcome probabilities.
    """
    n = plan.num_qubits
    branches: list[tuple[np.ndarray, float]] = [(zero_state(n), 1.0)]
    for op in _variant_ops(plan, specs, choice):
        if op[0] == "gate":
            branches = [(apply_gate(state, n, op[1]), sign) for state, sign in branches]
        else:
            _, lq, signed = op
            if not signed:
                # unsigned measurement on a wire that just ended: dephasing a
                # qubit nothing reads again cannot change any outcome
                continue
            mask = basis_bits(n, lq).astype(bool)
            forked = []
            for state, sign in branches:
                keep = state.copy()
                keep[mask] = 0.0
                flip = state.copy()
                flip[~mask] = 0.0
                for branch, branch_sign in ((keep, sign), (flip, -sign)):
                    if np.vdot(branch, branch).real > 1e-28:
                        forked.append((branch, branch_sign))
            branches = forked
    probs = []
    vals = []
    for state, sign in branches:
        probs.append(np.abs(state) ** 2)
        vals.append(sign * values)
    return np.concatenate(probs), np.concatenate(vals)


def _sample_mean(probs: np.ndarray, values: np.ndarray, shots: int,
                 rng: np.random.Generator) -> float:
    total = probs.sum()
    counts = rng.multinomial(shots, probs / total)
    return float(counts @ values) / shots


# -- estimator -----------------------------------------------------------------

def cut_estimate(circuit: CircuitIR, cuts: list, obs: ProductObservable,
                 eps: float, seed: int = 0) -> EstimatorRun:
    """Estimate <obs> of the uncut circuit from independently sampled
    subcircuit variants. Standard deviation is bounded by ``eps``."""
    plans, r = plan_partitions(circuit, cuts, obs)
    specs = cut_specs(circuit, cuts)
    allocation = allocate_shots(plans, specs, r, eps)

    means: dict[int, dict[tuple[int, ...], float]] = {}
    for c, plan in sorted(plans.items()):
        values = value_table(plan.factors, plan.num_qubits)
        means[c] = {}
        for ordinal, (variant, shots) in enumerate(sorted(allocation.variants[c].items())):
            if shots == 0:
                means[c][variant] = 0.0
                continue
            choice = dict(zip(plan.attached_cuts, variant))
            probs, vals = variant_distribution(plan, specs, choice, values)
            rng = np.random.default_rng([seed, c, ordinal])
            means[c][variant] = _sample_mean(probs, vals, shots, rng)

    estimate = combine_means(plans, specs, means)
    return EstimatorRun(estimate=estimate, variant_means=means,
                        allocation=allocation, r=r, seed=seed)


def combine_means(plans: dict[int, PartitionPlan], specs: list[DecompositionSpec],
                  means: dict[int, dict[tuple[int, ...], float]]) -> float:
    """Coefficient-weighted contraction of per-partition mean tensors.

    estimate = sum over all term choices of prod_j a_j(i_j) *
    prod_c mean_c(choice restricted to the cuts touching c).
    """
    if len(specs) > len(string.ascii_letters):
        raise ValueError("too many cuts to contract")
    letters = string.ascii_letters
    subscripts = []
    operands = []
    for j, spec in enumerate(specs):
        subscripts.append(letters[j])
        operands.append(np.array([t.coeff for t in spec.terms]))
    for c, plan in sorted(plans.items()):
        shape = tuple(len(specs[j].terms) for j in plan.attached_cuts)
        tensor = np.empty(shape if shape else (1,))
        if shape:
            for variant, mean in means[c].items():
                tensor[variant] = mean
            subscripts.append("".join(letters[j] for j in plan.attached_cuts))
        else:
            tensor[0] = means[c][()]
            subscripts.append("")
            tensor = tensor.reshape(())
        operands.append(tensor)
    return float(np.einsum(",".join(subscripts) + "->", *operands))
