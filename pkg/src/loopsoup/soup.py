"""Poissonian ensembles of continuous-time loops on a transient chain.

Two independent samplers produce the ensemble law:

  * wilson_sample: intensity 1 only.  Loop-erased random walks run in vertex
    order toward the cemetery; the erased cycles, repackaged through a
    Poisson-Dirichlet split of each base point's local time, form the loop
    ensemble, jointly with the random spanning tree rooted at the cemetery.
  * direct_sample: any intensity alpha > 0.  A Poisson number of loops is
    drawn from the truncated loop-length law and each loop is filled in by
    bridge conditioning; one-point loop time is aggregated per vertex as an
    independent Gamma(alpha, 1) variable.

Loops are stored as shift-equivalence representatives, rotated so the minimal
vertex index comes first (ties broken by the lexicographically smallest vertex
sequence).  Only class functions of the ensemble (crossing counts, occupation)
are compared across samplers.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .graphs import ChainKernel, WeightedGraph
from .network import Network
from .rng import as_generator


@dataclass(frozen=True)
class BasedLoop:
    """Cyclic vertex sequence with one positive holding time per visit."""

    vertices: tuple
    times: tuple

    def __post_init__(self):
        if len(self.vertices) != len(self.times):
            raise ValueError("one holding time per visit required")
        if not self.vertices:
            raise ValueError("a loop visits at least one vertex")

    @property
    def length(self) -> int:
        return len(self.vertices)

    @property
    def is_trivial(self) -> bool:
        return len(self.vertices) == 1

    @property
    def total_time(self) -> float:
        return float(sum(self.times))


@dataclass(frozen=True)
class LoopSoup:
    """A sampled loop ensemble: loops, aggregated one-point time, intensity."""

    graph: WeightedGraph
    alpha: float
    loops: tuple
    trivial_time: np.ndarray
    meta: dict = field(default_factory=dict)


def _canonical(verts, times) -> tuple:
    """Rotate a cyclic sequence so the minimal vertex index leads; ties go to
    the lexicographically smallest vertex sequence."""
    p = len(verts)
    if p == 1:
        return tuple(verts), tuple(times)
    m = min(verts)
    best = None
    best_r = 0
    for r in range(p):
        if verts[r] != m:
            continue
        rot = verts[r:] + verts[:r]
        if best is None or rot < best:
            best = rot
            best_r = r
    return tuple(best), tuple(times[best_r:] + times[:best_r])


def wilson_sample(kernel: ChainKernel, seed) -> tuple:
    """Run loop-erased walks to the cemetery; return (parents, LoopSoup at 1).

    parents[x] is the tree parent of x, -1 meaning the cemetery.  The erased
    cycles at each vertex are regrouped into loops by a Poisson-Dirichlet(0,1)
    split of the vertex's base local time; stick mass not claimed by any cycle
    becomes one-point loop time.
    """
    rng = as_generator(seed)
    n = kernel.n
    settled = [False] * n
    parent = [-1] * n
    cycles_at: list = [[] for _ in range(n)]
    leftover = [0.0] * n

    for start in range(n):
        if settled[start]:
            continue
        path = [start]
        pos = {start: 0}
        holds = [rng.standard_exponential()]
        while True:
            y = path[-1]
            z = kernel.walk_step(y, rng)
            if z == -1 or settled[z]:
                for i, v in enumerate(path):
                    settled[v] = True
                    parent[v] = path[i + 1] if i + 1 < len(path) else (-1 if z == -1 else z)
                    leftover[v] = holds[i]
                break
            j = pos.get(z)
            if j is not None:
                # walk returned to z: erase the cycle, keep its visit times
                cycles_at[z].append((holds[j], tuple(path[j + 1:]), tuple(holds[j + 1:])))
                for v in path[j + 1:]:
                    del pos[v]
                del path[j + 1:]
                del holds[j + 1:]
                holds[j] = rng.standard_exponential()
            else:
                path.append(z)
                pos[z] = len(path) - 1
                holds.append(rng.standard_exponential())

    loops = []
    trivial = np.zeros(n)
    for z in range(n):
        cycles = cycles_at[z]
        base_total = leftover[z] + sum(c[0] for c in cycles)
        if not cycles:
            trivial[z] = base_total
            continue
        # size-biased i.i.d. allocation of cycles onto PD(0,1) sticks,
        # generated lazily by uniform stick breaking
        fracs: list = []
        cum: list = []
        rem = 1.0
        assignment = []
        for _ in cycles:
            u = rng.random()
            while not cum or u >= cum[-1]:
                piece = rem * rng.random()
                fracs.append(piece)
                rem -= piece
                cum.append(1.0 - rem)
            lo = 0
            hi = len(cum) - 1
            while lo < hi:
                mid = (lo + hi) // 2
                if u < cum[mid]:
                    hi = mid
                else:
                    lo = mid + 1
            assignment.append(lo)
        used = 0.0
        by_stick: dict = {}
        for idx, stick in enumerate(assignment):
            by_stick.setdefault(stick, []).append(idx)
        for stick in sorted(by_stick):
            members = by_stick[stick]
            stick_time = fracs[stick] * base_total
            used += fracs[stick]
            shares = rng.dirichlet(np.ones(len(members))) * stick_time
            verts: list = []
            times: list = []
            for share, idx in zip(shares, members):
                _, inner_v, inner_t = cycles[idx]
                verts.append(z)
                times.append(float(share))
                verts.extend(inner_v)
                times.extend(inner_t)
            cv, ct = _canonical(verts, times)
            loops.append(BasedLoop(cv, ct))
        trivial[z] = base_total * (1.0 - used)

    soup = LoopSoup(
        graph=kernel.graph,
        alpha=1.0,
        loops=tuple(loops),
        trivial_time=trivial,
        meta={"sampler": "wilson"},
    )
    return tuple(parent), soup


def _pick(rng, weights: np.ndarray) -> int:
    cum = np.cumsum(weights)
    u = rng.random() * cum[-1]
    return int(np.searchsorted(cum, u, side="right").clip(0, len(weights) - 1))


def direct_sample(kernel: ChainKernel, alpha: float, eps: float = 1e-9, seed=None) -> LoopSoup:
    """Poisson(alpha * truncated mass) loops from the length law, each filled
    in by bridge conditioning; Gamma(alpha, 1) one-point time per vertex."""
    if alpha <= 0:
        raise ValueError(f"intensity must be positive, got {alpha}")
    rng = as_generator(seed)
    cum, total_mass, n_max, discarded = kernel.length_distribution(eps)
    n_loops = int(rng.poisson(alpha * total_mass))
    loops = []
    for _ in range(n_loops):
        u = rng.random()
        length = 2 + int(np.searchsorted(cum, u, side="right").clip(0, len(cum) - 1))
        pows = kernel.q_powers(length)
        start = _pick(rng, np.diag(pows[length]).copy())
        verts = [start]
        for j in range(1, length):
            y = verts[-1]
            w = kernel.q_matrix[y] * pows[length - j][:, start]
            verts.append(_pick(rng, w))
        times = rng.standard_exponential(length)
        cv, ct = _canonical(verts, [float(t) for t in times])
        loops.append(BasedLoop(cv, ct))
    trivial = rng.gamma(alpha, 1.0, size=kernel.n)
    return LoopSoup(
        graph=kernel.graph,
        alpha=float(alpha),
        loops=tuple(loops),
        trivial_time=trivial,
        meta={
            "sampler": "direct",
            "eps": eps,
            "max_length": n_max,
            "discarded_mu_mass": discarded,
        },
    )


def occupation(soup: LoopSoup, kernel: ChainKernel) -> np.ndarray:
    """Total loop time per vertex (one-point time included) divided by lam."""
    occ = np.array(soup.trivial_time, dtype=float)
    for loop in soup.loops:
        for v, t in zip(loop.vertices, loop.times):
            occ[v] += t
    return occ / kernel.lam


def jump_matrix(soup: LoopSoup) -> Network:
    """Directed crossing counts of all loops; one-point loops contribute none."""
    n = soup.graph.n
    counts = np.zeros((n, n), dtype=np.int64)
    for loop in soup.loops:
        p = loop.length
        if p < 2:
            continue
        verts = loop.vertices
        for i in range(p):
            counts[verts[i], verts[(i + 1) % p]] += 1
    return Network(soup.graph, counts)


def merge_soups(a: LoopSoup, b: LoopSoup) -> LoopSoup:
    """Superpose two independent ensembles; intensities add."""
    if a.graph.vertices != b.graph.vertices:
        raise ValueError("cannot merge ensembles over different graphs")
    return LoopSoup(
        graph=a.graph,
        alpha=a.alpha + b.alpha,
        loops=a.loops + b.loops,
        trivial_time=np.asarray(a.trivial_time) + np.asarray(b.trivial_time),
        meta={"merged": [a.meta, b.meta]},
    )


def mu_mass_nontrivial(kernel: ChainKernel) -> float:
    """Total loop-measure mass of nontrivial loops, -log det(I - P)."""
    return kernel.mu_mass
