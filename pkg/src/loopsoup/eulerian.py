"""Exact laws of the random crossing network of a loop ensemble.

The crossing-count matrix N of a loop ensemble at intensity alpha has a fully
computable law on a transient chain:

  * moment generating functional  E[prod Z^N] = [det(I-P^Z)/det(I-P)]^(-alpha)
  * pointwise probabilities, two independent routes (cycle-weighted
    permutation sums for general alpha; a factorial formula at alpha = 1)
  * the one-loop measure mu(k) via arborescence counts, whose Poisson
    exponential reconstructs the alpha = 1 law layer by layer
  * rooted tour counts of a network (arborescences times factorials)
  * max flow across the network digraph

All enumeration is graded by the total crossing count |k| and hard-capped, so
calls either finish quickly or raise BudgetExceeded/TooLarge.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import permutations

import numpy as np

from .errors import (
    BadForm,
    BadPartition,
    BudgetExceeded,
    DisconnectedSupport,
    NotEulerian,
    SingularTwist,
    TooLarge,
    ZeroNetwork,
)
from .exact import arborescence_count
from .graphs import ChainKernel
from .network import Network

ALPHA_NETWORK_CAP = 8
ENUMERATION_CAP = 20


@dataclass(frozen=True)
class ModifierMatrix:
    """Hermitian edge modifier Z with |Z_{x,y}| <= 1, multiplying P entrywise.

    The diagonal never matters (P has zero diagonal); it is forced to 1.
    """

    entries: np.ndarray

    def __post_init__(self):
        z = np.asarray(self.entries, dtype=complex)
        if z.ndim != 2 or z.shape[0] != z.shape[1]:
            raise BadForm(f"modifier must be square, got shape {z.shape}")
        if not np.allclose(z, z.conj().T, atol=1e-12, rtol=0.0):
            raise BadForm("modifier must be Hermitian")
        if (np.abs(z) > 1.0 + 1e-12).any():
            raise BadForm("modifier entries must have modulus <= 1")
        z = z.copy()
        np.fill_diagonal(z, 1.0)
        z.setflags(write=False)
        object.__setattr__(self, "entries", z)

    @classmethod
    def ones(cls, n: int) -> "ModifierMatrix":
        return cls(np.ones((n, n), dtype=complex))

    @classmethod
    def from_edge_value(cls, n: int, i: int, j: int, value: complex) -> "ModifierMatrix":
        """All-ones modifier with value at (i, j) and its conjugate at (j, i)."""
        z = np.ones((n, n), dtype=complex)
        z[i, j] = value
        z[j, i] = np.conj(value)
        return cls(z)

    @classmethod
    def from_one_form(cls, omega) -> "ModifierMatrix":
        """Unit-modulus modifier exp(2 pi i omega) from an antisymmetric one-form."""
        omega = np.asarray(omega, dtype=float)
        if not np.allclose(omega, -omega.T, atol=1e-12, rtol=0.0):
            raise BadForm("one-form must be antisymmetric")
        return cls(np.exp(2j * np.pi * omega))


def _as_modifier_array(kernel: ChainKernel, z) -> np.ndarray:
    if isinstance(z, ModifierMatrix):
        arr = z.entries
    else:
        arr = ModifierMatrix(np.asarray(z, dtype=complex)).entries
    if arr.shape != (kernel.n, kernel.n):
        raise BadForm(f"modifier must be {kernel.n}x{kernel.n}, got {arr.shape}")
    return arr


def generating_function(kernel: ChainKernel, z, alpha: float) -> complex:
    """E[prod_{x,y} Z_{x,y}^{N_{x,y}}] = [det(I-P^Z)/det(I-P)]^(-alpha).

    For a Hermitian modifier with |Z| <= 1 the determinant ratio is a real
    number >= 1, so the value is real in (0, 1].
    """
    arr = _as_modifier_array(kernel, z)
    det_z = kernel.det_i_minus_pz(arr)
    if abs(det_z) < 1e-300:
        raise SingularTwist("det(I - P^Z) vanished; modifier outside the valid domain")
    ratio = det_z / kernel.det_i_minus_p
    # Hermitian |Z|<=1 keeps the twisted energy matrix positive definite,
    # so the ratio is real positive and the principal power is the right one.
    if abs(ratio.imag) < 1e-9 * max(1.0, abs(ratio.real)) and ratio.real > 0:
        return complex(ratio.real ** (-alpha))
    return complex(ratio ** (-alpha))


def exact_network_prob_alpha1(kernel: ChainKernel, k: Network) -> float:
    """P(N = k) at alpha = 1: det(I-P) (prod_x k_x!) / (prod_{xy} k_{xy}!) prod P^k."""
    if not k.is_eulerian():
        raise NotEulerian("network is not balanced")
    counts = k.counts
    log_p = 0.0
    for x, y in zip(*np.nonzero(counts)):
        c = int(counts[x, y])
        log_p += c * math.log(kernel.P[x, y]) - math.lgamma(c + 1)
    for kx in k.out_degrees:
        if kx > 0:
            log_p += math.lgamma(int(kx) + 1)
    return float(kernel.det_i_minus_p * math.exp(log_p))


def _alpha_coefficient(k: Network, alpha: float) -> float:
    """Cycle-weighted count of pairings realizing the crossing profile k.

    Sum over permutations of the vertex list with each x repeated k_x times,
    keeping those whose step profile equals k, weighted alpha^(cycle count);
    divided by prod_x k_x! for the repetition symmetry.
    """
    counts = k.counts
    out_deg = k.out_degrees
    verts: list[int] = []
    for x in range(counts.shape[0]):
        verts.extend([x] * int(out_deg[x]))
    m = len(verts)
    if m == 0:
        return 1.0
    total = 0.0
    target: dict[tuple[int, int], int] = {}
    for x, y in zip(*np.nonzero(counts)):
        target[(int(x), int(y))] = int(counts[x, y])
    for sigma in permutations(range(m)):
        profile: dict[tuple[int, int], int] = {}
        ok = True
        for i in range(m):
            e = (verts[i], verts[sigma[i]])
            if e not in target:
                ok = False
                break
            c = profile.get(e, 0) + 1
            if c > target[e]:
                ok = False
                break
            profile[e] = c
        if not ok:
            continue
        # full usage is implied: total steps m = |k| and no edge exceeded
        seen = [False] * m
        cycles = 0
        for i in range(m):
            if seen[i]:
                continue
            cycles += 1
            j = i
            while not seen[j]:
                seen[j] = True
                j = sigma[j]
        total += alpha**cycles
    sym = 1.0
    for kx in out_deg:
        sym *= math.factorial(int(kx))
    return total / sym


def exact_network_prob_alpha(kernel: ChainKernel, k: Network, alpha: float) -> float:
    """P(N = k) at general alpha via the cycle-weighted permutation sum."""
    if not k.is_eulerian():
        raise NotEulerian("network is not balanced")
    if k.total > ALPHA_NETWORK_CAP:
        raise TooLarge(
            f"general-alpha probability limited to |k| <= {ALPHA_NETWORK_CAP}, got {k.total}"
        )
    coeff = _alpha_coefficient(k, alpha)
    p_prod = 1.0
    for x, y in zip(*np.nonzero(k.counts)):
        p_prod *= kernel.P[x, y] ** int(k.counts[x, y])
    return float(coeff * kernel.det_i_minus_p**alpha * p_prod)


def _balanced_layer(graph, directed_edges, m: int):
    """All balanced count matrices with total m over the given directed edges."""
    n = graph.n
    results = []
    counts = np.zeros((n, n), dtype=np.int64)

    def rec(pos: int, remaining: int):
        if pos == len(directed_edges):
            if remaining == 0:
                net = counts.sum(axis=1) - counts.sum(axis=0)
                if not net.any():
                    results.append(Network(graph, counts.copy()))
            return
        x, y = directed_edges[pos]
        # prune: remaining edges can absorb anything, but balance needs checking at the end
        for c in range(remaining + 1):
            counts[x, y] = c
            rec(pos + 1, remaining - c)
        counts[x, y] = 0

    rec(0, m)
    return results


def _directed_edges(graph):
    edges = []
    for i, j in graph.edge_pairs:
        edges.append((i, j))
        edges.append((j, i))
    return edges


@dataclass(frozen=True)
class NetworkLawEntry:
    network: Network
    probability: float
    mu_mass: float


def enumerate_eulerian(kernel: ChainKernel, delta: float) -> list:
    """Balanced networks in increasing |k|, complete layers, until the
    accumulated alpha = 1 probability reaches 1 - delta.

    Complete layers matter: they make truncated convolutions exact on the
    retained support.  Raises BudgetExceeded if |k| would pass 20.
    """
    if not 0 < delta <= 0.01:
        raise ValueError(f"mass budget must be in (0, 0.01], got {delta}")
    graph = kernel.graph
    edges = _directed_edges(graph)
    entries = [
        NetworkLawEntry(Network.zeros(graph), float(kernel.det_i_minus_p), 0.0)
    ]
    accum = entries[0].probability
    m = 0
    while accum < 1.0 - delta:
        m += 1
        if m > ENUMERATION_CAP:
            raise BudgetExceeded(
                f"accumulated probability {accum:.6g} < 1 - {delta:g} at |k| = {ENUMERATION_CAP}"
            )
        for net in _balanced_layer(graph, edges, m):
            p = exact_network_prob_alpha1(kernel, net)
            mu = mu_network_measure(kernel, net)
            entries.append(NetworkLawEntry(net, p, mu))
            accum += p
    return entries


def best_tour_count(k: Network) -> int:
    """Rooted Eulerian tour count: |k| * arborescences * prod_x (k_x - 1)!.

    Root-independence of the arborescence count is asserted, not assumed.
    """
    if k.total == 0:
        raise ZeroNetwork("the zero network has no tours")
    if not k.is_eulerian():
        raise NotEulerian("network is not balanced")
    if not k.support_connected():
        raise DisconnectedSupport("network support is not connected")
    sup = [int(v) for v in k.support]
    taus = [arborescence_count(k, root) for root in sup]
    if len(set(taus)) != 1:
        raise ArithmeticError(f"arborescence count varies with root: {taus}")
    count = k.total * taus[0]
    for x in sup:
        count *= math.factorial(int(k.out_degrees[x]) - 1)
    return int(count)


def mu_network_measure(kernel: ChainKernel, k: Network) -> float:
    """One-loop measure of a network: tau(k) prod_x (k_x-1)! prod_{xy} P^k / k!.

    Zero when the support is disconnected (a single loop cannot split).
    """
    if k.total == 0:
        raise ZeroNetwork("the zero network carries no loop measure")
    if not k.is_eulerian():
        raise NotEulerian("network is not balanced")
    sup = [int(v) for v in k.support]
    tau = arborescence_count(k, sup[0])
    if tau == 0:
        return 0.0
    log_val = math.log(tau)
    for x in sup:
        log_val += math.lgamma(int(k.out_degrees[x]))
    for x, y in zip(*np.nonzero(k.counts)):
        c = int(k.counts[x, y])
        log_val += c * math.log(kernel.P[x, y]) - math.lgamma(c + 1)
    return float(math.exp(log_val))


def verify_poisson_convolution(kernel: ChainKernel, delta: float):
    """Rebuild the alpha = 1 network law as det(I-P) * sum_j mu^(*j) / j!.

    Convolution runs over the truncated support; complete layers make every
    retained value exact, so the comparison is a pure identity check.
    Returns a TestReport.
    """
    from .reports import TestReport

    entries = enumerate_eulerian(kernel, delta)
    report = TestReport(name="poisson-convolution")
    report.meta["support_size"] = len(entries)
    report.meta["delta"] = delta
    max_total = max(e.network.total for e in entries)
    # flat integer tuples keep the convolution arithmetic cheap
    flat = {e.network.key(): tuple(int(c) for c in e.network.counts.ravel()) for e in entries}
    totals = {flat[e.network.key()]: e.network.total for e in entries}
    mu = {
        flat[e.network.key()]: e.mu_mass for e in entries if e.network.total > 0
    }
    zero_key = flat[Network.zeros(kernel.graph).key()]
    reconstructed = {key: 0.0 for key in totals}
    reconstructed[zero_key] = 1.0
    current = {zero_key: 1.0}
    j = 0
    factorial = 1.0
    # grading by |k| terminates the expansion: every nonzero factor has |k| >= 2
    while current:
        j += 1
        factorial *= j
        nxt: dict[tuple, float] = {}
        for key_a, val_a in current.items():
            budget = max_total - totals[key_a]
            for key_b, mu_b in mu.items():
                if totals[key_b] > budget:
                    continue
                key_s = tuple(a + b for a, b in zip(key_a, key_b))
                if key_s in reconstructed:
                    nxt[key_s] = nxt.get(key_s, 0.0) + val_a * mu_b
        for key_s, val in nxt.items():
            reconstructed[key_s] += val / factorial
        current = nxt
    max_err = 0.0
    for e in entries:
        rebuilt = kernel.det_i_minus_p * reconstructed[flat[e.network.key()]]
        max_err = max(max_err, abs(rebuilt - e.probability))
    report.add_bound("max_abs_reconstruction_error", max_err, 1e-6)
    report.add_info("truncated_mu_mass", sum(mu.values()),
                    note="sum over retained nonzero networks")
    report.add_info("total_mu_mass", kernel.mu_mass)
    return report


def max_flow(k: Network, sources, sinks) -> int:
    """Max integer flow from sources to sinks with capacity k_{xy} per edge."""
    graph = k.graph
    a = {graph.index(v) for v in sources}
    b = {graph.index(v) for v in sinks}
    if not a or not b:
        raise BadPartition("source and sink sets must be nonempty")
    if a & b:
        raise BadPartition("source and sink sets must be disjoint")
    n = graph.n
    size = n + 2
    s, t = n, n + 1
    cap = np.zeros((size, size), dtype=np.int64)
    cap[:n, :n] = k.counts
    inf = int(k.counts.sum()) + 1
    for x in a:
        cap[s, x] = inf
    for x in b:
        cap[x, t] = inf
    flow = 0
    while True:
        # BFS for a shortest augmenting path
        parent = [-1] * size
        parent[s] = s
        queue = [s]
        while queue and parent[t] == -1:
            u = queue.pop(0)
            for v in range(size):
                if parent[v] == -1 and cap[u, v] > 0:
                    parent[v] = u
                    queue.append(v)
        if parent[t] == -1:
            return int(flow)
        bottleneck = inf
        v = t
        while v != s:
            u = parent[v]
            bottleneck = min(bottleneck, int(cap[u, v]))
            v = u
        v = t
        while v != s:
            u = parent[v]
            cap[u, v] -= bottleneck
            cap[v, u] += bottleneck
            v = u
        flow += bottleneck
