"""Cycle space of the graph, harmonic one-forms, and the law of the random
homology class of a loop ensemble.

The cycle basis comes from a deterministic spanning tree: one oriented cycle
per non-tree edge.  A balanced network's class is read off its antisymmetric
part.  The class law is recovered by evaluating the crossing-count generating
functional at unit-modulus twists on a uniform grid of the dual torus and
inverting with a discrete Fourier transform.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import (
    Disconnected,
    EmptyBasis,
    GridTooCoarse,
    MismatchBeyondTolerance,
    NonIntegral,
    NotEulerian,
    TooLarge,
)
from .eulerian import generating_function
from .exact import spanning_tree_weight_sum
from .graphs import ChainKernel, WeightedGraph
from .network import Network

HARMONIC_TOL = 1e-10
VOLUME_TOL = 1e-10
GRID_CAP = 512
DIM_CAP = 3


@dataclass(frozen=True)
class CycleBasis:
    """Spanning tree plus one oriented fundamental cycle per non-tree edge."""

    graph: WeightedGraph
    tree_edges: tuple
    nontree_edges: tuple
    cycles: tuple

    @property
    def n(self) -> int:
        return len(self.cycles)


def cycle_basis(graph: WeightedGraph) -> CycleBasis:
    """Deterministic spanning tree (heaviest conductance first, index
    tie-break), cycles oriented along the non-tree edge u -> v with u < v."""
    if not graph.is_connected():
        raise Disconnected("graph has no spanning tree")
    edges = sorted(graph.edge_pairs, key=lambda e: (-graph.conductance[e[0], e[1]], e))
    parent_uf = list(range(graph.n))

    def find(a: int) -> int:
        while parent_uf[a] != a:
            parent_uf[a] = parent_uf[parent_uf[a]]
            a = parent_uf[a]
        return a

    tree = []
    nontree = []
    for i, j in edges:
        ri, rj = find(i), find(j)
        if ri == rj:
            nontree.append((i, j))
        else:
            parent_uf[ri] = rj
            tree.append((i, j))
    tree.sort()
    nontree.sort()

    adj: list = [[] for _ in range(graph.n)]
    for i, j in tree:
        adj[i].append(j)
        adj[j].append(i)

    def tree_path(a: int, b: int) -> list:
        # BFS from a toward b along tree edges
        prev = {a: None}
        queue = [a]
        while queue:
            x = queue.pop(0)
            if x == b:
                break
            for y in adj[x]:
                if y not in prev:
                    prev[y] = x
                    queue.append(y)
        path = [b]
        while path[-1] != a:
            path.append(prev[path[-1]])
        path.reverse()
        return path

    cycles = []
    for u, v in nontree:
        c = np.zeros((graph.n, graph.n), dtype=np.int64)
        c[u, v] += 1
        c[v, u] -= 1
        walk = tree_path(v, u)
        for a, b in zip(walk[:-1], walk[1:]):
            c[a, b] += 1
            c[b, a] -= 1
        if c.sum(axis=1).any():
            raise ArithmeticError("fundamental cycle has nonzero divergence")
        c.setflags(write=False)
        cycles.append(c)
    return CycleBasis(graph, tuple(tree), tuple(nontree), tuple(cycles))


@dataclass(frozen=True)
class HomologyClass:
    coords: tuple

    def __add__(self, other: "HomologyClass") -> "HomologyClass":
        return HomologyClass(tuple(a + b for a, b in zip(self.coords, other.coords)))


def network_homology_class(k: Network, basis: CycleBasis) -> HomologyClass:
    """Coordinates of the antisymmetric part of k in the cycle basis.

    The crossing flow k_{xy} - k_{yx} of a balanced network is an integer
    circulation, hence an exact integer combination of the fundamental
    cycles; the residual is asserted to vanish.
    """
    if not k.is_eulerian():
        raise NotEulerian("network is not balanced")
    flow = k.counts - k.counts.T
    coords = tuple(int(flow[u, v]) for u, v in basis.nontree_edges)
    residual = flow.astype(np.int64)
    for j, c in zip(coords, basis.cycles):
        residual = residual - j * c
    if residual.any():
        raise NonIntegral("crossing flow is not an integer span of the cycle basis")
    return HomologyClass(coords)


@dataclass(frozen=True)
class HarmonicForm:
    """Antisymmetric edge function with zero conductance-weighted divergence."""

    values: np.ndarray

    def holonomy(self, cycle: np.ndarray) -> float:
        return float(0.5 * np.sum(cycle * self.values))


def harmonic_basis(graph: WeightedGraph, basis: CycleBasis) -> list:
    """Harmonic forms dual to the cycle basis: holonomy(omega_i, c_j) = d_ij.

    Solved as a joint linear system of per-vertex harmonicity constraints and
    per-cycle holonomy constraints over the edge values.
    """
    if not graph.is_connected():
        raise Disconnected("harmonic forms need a connected graph")
    edges = graph.edge_pairs
    n_e = len(edges)
    rows = []
    for x in range(graph.n):
        row = np.zeros(n_e)
        for e_idx, (u, v) in enumerate(edges):
            if x == u:
                row[e_idx] = graph.conductance[u, v]
            elif x == v:
                row[e_idx] = -graph.conductance[u, v]
        rows.append(row)
    for c in basis.cycles:
        rows.append(np.array([c[u, v] for u, v in edges], dtype=float))
    a = np.vstack(rows) if rows else np.zeros((0, n_e))
    out = []
    for i in range(basis.n):
        b = np.zeros(graph.n + basis.n)
        b[graph.n + i] = 1.0
        sol, *_ = np.linalg.lstsq(a, b, rcond=None)
        if np.max(np.abs(a @ sol - b)) > HARMONIC_TOL:
            raise ArithmeticError("harmonic system did not close to tolerance")
        values = np.zeros((graph.n, graph.n))
        for e_idx, (u, v) in enumerate(edges):
            values[u, v] = sol[e_idx]
            values[v, u] = -sol[e_idx]
        values.setflags(write=False)
        out.append(HarmonicForm(values))
    return out


def intersection_matrix(basis: CycleBasis, graph: WeightedGraph) -> np.ndarray:
    """Gram matrix of the cycle basis under the edge inner product 1/C_e."""
    if basis.n == 0:
        raise EmptyBasis("graph has no independent cycles")
    lam = np.zeros((basis.n, basis.n))
    for i in range(basis.n):
        for j in range(basis.n):
            s = 0.0
            for u, v in graph.edge_pairs:
                s += basis.cycles[i][u, v] * basis.cycles[j][u, v] / graph.conductance[u, v]
            lam[i, j] = s
    return lam


@dataclass(frozen=True)
class JacobianVolume:
    value: float
    via_intersection: float
    via_trees: float
    degenerate: bool
    tree_weight: float


def jacobian_volume(graph: WeightedGraph) -> JacobianVolume:
    """Volume of the torus of harmonic forms modulo integer forms, computed
    from the intersection determinant and from the spanning tree weight sum;
    the two routes must agree to relative 1e-10."""
    tree_weight = spanning_tree_weight_sum(graph)
    basis = cycle_basis(graph)
    via_trees = tree_weight**-0.5
    if basis.n == 0:
        return JacobianVolume(1.0, 1.0, 1.0, True, tree_weight)
    lam = intersection_matrix(basis, graph)
    prod_c = 1.0
    for u, v in graph.edge_pairs:
        prod_c *= graph.conductance[u, v]
    via_int = (np.linalg.det(lam) * prod_c) ** -0.5
    if abs(via_int - via_trees) > VOLUME_TOL * abs(via_trees):
        raise MismatchBeyondTolerance(
            f"volume routes disagree: {via_int!r} vs {via_trees!r}"
        )
    return JacobianVolume(float(via_trees), float(via_int), float(via_trees),
                          False, float(tree_weight))


@dataclass(frozen=True)
class HomologyLaw:
    probs: dict
    grid_m: int
    captured_mass: float
    imag_residue: float
    negative_residue: float
    alpha: float

    def prob(self, coords) -> float:
        return self.probs.get(tuple(coords), 0.0)

    def symmetry_defect(self) -> float:
        worst = 0.0
        for coords, p in self.probs.items():
            mirror = tuple(-c for c in coords)
            worst = max(worst, abs(p - self.probs.get(mirror, 0.0)))
        return worst


def _indicator_forms(basis: CycleBasis) -> list:
    out = []
    for u, v in basis.nontree_edges:
        m = np.zeros((basis.graph.n, basis.graph.n))
        m[u, v] = 1.0
        m[v, u] = -1.0
        out.append(m)
    return out


def homology_distribution(kernel: ChainKernel, basis: CycleBasis, alpha: float,
                          grid_m: int, forms=None) -> HomologyLaw:
    """Law of the homology class by Fourier inversion of the twisted
    determinant ratio on a uniform grid of the dual torus.

    forms: one-forms dual to the cycle basis; defaults to the non-tree edge
    indicators.  Any dual family with integer holonomy pairing gives the same
    law; the harmonic duals are accepted for cross-checks.
    """
    if grid_m < 8 or grid_m & (grid_m - 1) != 0:
        raise ValueError(f"grid size must be a power of two >= 8, got {grid_m}")
    n = basis.n
    if n == 0:
        return HomologyLaw({(): 1.0}, grid_m, 1.0, 0.0, 0.0, alpha)
    if forms is None:
        forms = _indicator_forms(basis)
    shape = (grid_m,) * n
    phi = np.empty(shape, dtype=complex)
    ticks = np.arange(grid_m) / grid_m
    for idx in np.ndindex(shape):
        omega = sum(ticks[i] * f for i, f in zip(idx, forms))
        z = np.exp(2j * np.pi * omega)
        phi[idx] = generating_function(kernel, z, alpha)
    raw = np.fft.fftn(phi) / grid_m**n
    imag_residue = float(np.max(np.abs(raw.imag)))
    real = raw.real
    negative_residue = float(max(0.0, -real.min()))
    if imag_residue > 1e-10 or negative_residue > 1e-10:
        raise ArithmeticError(
            f"inversion residues too large: imag {imag_residue}, negative {negative_residue}"
        )
    real = np.clip(real, 0.0, None)
    half = grid_m // 2
    probs: dict = {}
    captured = 0.0
    for idx in np.ndindex(shape):
        coords = tuple(i - grid_m if i >= half else i for i in idx)
        if any(abs(c) >= half for c in coords):
            continue
        p = float(real[idx])
        captured += p
        if p >= 1e-15:
            probs[coords] = p
    if captured < 0.999:
        raise GridTooCoarse(
            f"window holds {captured:.6f} < 0.999 of the mass at grid {grid_m}"
        )
    return HomologyLaw(probs, grid_m, captured, imag_residue, negative_residue, alpha)


def homology_distribution_auto(kernel: ChainKernel, basis: CycleBasis, alpha: float,
                               start: int = 8) -> HomologyLaw:
    """Double the grid until the captured mass and a Cauchy criterion
    (max change 1e-8 between grids) both hold; cap at 512 per dimension."""
    if basis.n > DIM_CAP:
        raise TooLarge(f"auto grid limited to {DIM_CAP} cycles, got {basis.n}")
    m = max(8, start)
    prev: HomologyLaw | None = None
    while m <= GRID_CAP:
        try:
            law = homology_distribution(kernel, basis, alpha, m)
        except GridTooCoarse:
            prev = None
            m *= 2
            continue
        if prev is not None:
            keys = set(prev.probs) | set(law.probs)
            delta = max(abs(law.prob(k) - prev.prob(k)) for k in keys)
            if delta <= 1e-8:
                return law
        prev = law
        m *= 2
    raise GridTooCoarse(f"grid cap {GRID_CAP} reached without convergence")


def pairing_phase(network: Network, omega: np.ndarray) -> complex:
    """exp(2 pi i sum_{x,y} k_{x,y} omega^{x,y}) for an antisymmetric omega."""
    s = float(np.sum(network.counts * omega))
    return complex(np.exp(2j * np.pi * s))
