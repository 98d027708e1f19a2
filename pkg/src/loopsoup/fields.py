"""Gaussian fields with the chain's Green covariance and the distributional
identities tying them to loop ensembles.

Conventions, recorded in every report:

  * real field: centered, covariance exactly G (symmetric square root).
  * complex field: phi = (phi1 + i phi2)/sqrt(2) with independent real parts,
    so E[phi_x conj(phi_y)] = G_{x,y} and E[phi_x phi_y] = 0.  Under this
    scaling the intensity-1 occupation field matches |phi|^2 and the
    intensity-1/2 field matches (1/2) phi_real^2.
  * occupation and excursion local times are normalized by lam.
  * the determinant identity uses the lam-normalized diagonal
    (1 + N_x) / lam_x; the unnormalized diagonal fails its own closed form.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import BadChi, BadSupport, DuplicateIndex
from .exact import permanent
from .graphs import ChainKernel
from .reports import TestReport
from .rng import as_generator
from .soup import direct_sample, jump_matrix, occupation

CONVENTIONS = {
    "complex_field": "E[phi conj(phi)] = G, phi = (phi1 + i phi2)/sqrt(2)",
    "isomorphism": "occupation(1/2) ~ phi_real^2/2; occupation(1) ~ |phi|^2",
    "det_identity_diagonal": "chi_x (1 + N_x) / lam_x",
    "local_time": "chain time divided by lam",
}


@dataclass(frozen=True)
class FieldSample:
    kind: str
    real: np.ndarray
    imag: np.ndarray | None = None

    @property
    def values(self) -> np.ndarray:
        if self.kind == "real":
            return self.real
        return self.real + 1j * self.imag


def sample_real_field(kernel: ChainKernel, seed) -> FieldSample:
    rng = as_generator(seed)
    return FieldSample(kind="real", real=kernel.field_factor @ rng.standard_normal(kernel.n))


def sample_real_fields(kernel: ChainKernel, count: int, seed) -> np.ndarray:
    """count x n matrix of independent real field samples."""
    rng = as_generator(seed)
    return rng.standard_normal((count, kernel.n)) @ kernel.field_factor


def sample_complex_field(kernel: ChainKernel, seed) -> FieldSample:
    rng = as_generator(seed)
    f1 = kernel.field_factor @ rng.standard_normal(kernel.n)
    f2 = kernel.field_factor @ rng.standard_normal(kernel.n)
    inv_sqrt2 = 1.0 / np.sqrt(2.0)
    return FieldSample(kind="complex", real=f1 * inv_sqrt2, imag=f2 * inv_sqrt2)


def sample_complex_fields(kernel: ChainKernel, count: int, seed) -> np.ndarray:
    rng = as_generator(seed)
    f1 = rng.standard_normal((count, kernel.n)) @ kernel.field_factor
    f2 = rng.standard_normal((count, kernel.n)) @ kernel.field_factor
    return (f1 + 1j * f2) / np.sqrt(2.0)


def complex_wick_moment(kernel: ChainKernel, sources, targets) -> float:
    """E[prod_j phi_{sources[j]} prod_j conj(phi_{targets[j]})] = Per(G block)."""
    src = [kernel.graph.index(v) for v in sources]
    tgt = [kernel.graph.index(v) for v in targets]
    if len(src) != len(tgt):
        return 0.0
    if not src:
        return 1.0
    return float(permanent(kernel.G[np.ix_(src, tgt)]))


def _two_sample_z(report: TestReport, name: str, a: np.ndarray, b: np.ndarray,
                  gate: float = 3.0, note: str = "") -> None:
    ma, mb = float(np.mean(a)), float(np.mean(b))
    se = float(np.sqrt(np.var(a) / len(a) + np.var(b) / len(b)))
    report.add_z(name, ma, mb, se, gate=gate, note=note)


def ks_two_sample(a: np.ndarray, b: np.ndarray) -> float:
    """Two-sample Kolmogorov-Smirnov distance."""
    a = np.sort(np.asarray(a, dtype=float))
    b = np.sort(np.asarray(b, dtype=float))
    grid = np.concatenate([a, b])
    fa = np.searchsorted(a, grid, side="right") / len(a)
    fb = np.searchsorted(b, grid, side="right") / len(b)
    return float(np.max(np.abs(fa - fb)))


def occupation_samples(kernel: ChainKernel, alpha: float, replicas: int, seed,
                       eps: float = 1e-9) -> np.ndarray:
    """replicas x n matrix of occupation fields from independent ensembles."""
    from .rng import replica_rng

    out = np.empty((replicas, kernel.n))
    base = int(seed) if not isinstance(seed, np.random.Generator) else None
    rng = seed if base is None else None
    for r in range(replicas):
        stream = replica_rng(base, r) if base is not None else rng
        soup = direct_sample(kernel, alpha, eps=eps, seed=stream)
        out[r] = occupation(soup, kernel)
    return out


def verify_isomorphism(kernel: ChainKernel, replicas: int, seed) -> TestReport:
    """Occupation fields against squared Gaussian fields, moments 1-4 and
    pairwise joints; exact two-sample KS on a one-vertex graph."""
    report = TestReport(name="isomorphism", conventions=dict(CONVENTIONS))
    report.meta["replicas"] = replicas
    names = kernel.graph.vertices
    n = kernel.n
    seed = int(seed)

    occ_half = occupation_samples(kernel, 0.5, replicas, seed)
    half_sq = 0.5 * sample_real_fields(kernel, replicas, seed + 1) ** 2
    occ_one = occupation_samples(kernel, 1.0, replicas, seed + 2)
    abs_sq = np.abs(sample_complex_fields(kernel, replicas, seed + 3)) ** 2

    for label, occ, ref in (
        ("half_vs_half_sq", occ_half, half_sq),
        ("one_vs_abs_sq", occ_one, abs_sq),
    ):
        for x in range(n):
            for r in range(1, 5):
                _two_sample_z(
                    report, f"{label}[{names[x]}]^moment{r}", occ[:, x] ** r, ref[:, x] ** r
                )
        for x in range(n):
            for y in range(x + 1, n):
                _two_sample_z(
                    report,
                    f"{label}[{names[x]},{names[y]}] joint",
                    occ[:, x] * occ[:, y],
                    ref[:, x] * ref[:, y],
                )
    if n == 1:
        d = ks_two_sample(occ_half[:, 0], half_sq[:, 0])
        report.add_bound("half_vs_half_sq KS", d, 0.01,
                         note="same law exactly on one vertex")
    return report


@dataclass(frozen=True)
class ChainExcursionField:
    """Occupation of the chain run from x0 until its local time there hits rho."""

    occupation: np.ndarray
    x0: int
    rho: float


def sample_excursion_field(kernel: ChainKernel, x0, rho: float, rng) -> ChainExcursionField:
    """Excursion occupation: a Poisson((lam-kappa)_{x0} * rho) number of
    independent excursions from x0, each walked in D until absorption back at
    x0; entry at x0 is rho exactly."""
    graph = kernel.graph
    x0 = graph.index(x0)
    occ = np.zeros(kernel.n)
    occ[x0] = rho
    escape = float(kernel.lam[x0] - graph.killing[x0])
    if escape <= 0:
        return ChainExcursionField(occ, x0, rho)
    neighbors = np.flatnonzero(graph.conductance[x0] > 0)
    weights = np.cumsum(graph.conductance[x0, neighbors])
    weights /= weights[-1]
    k = int(rng.poisson(escape * rho))
    time = np.zeros(kernel.n)
    for _ in range(k):
        y = int(neighbors[np.searchsorted(weights, rng.random(), side="right")])
        while y != x0:
            time[y] += rng.standard_exponential()
            y = kernel.walk_step(y, rng)
            if y == -1:
                raise BadSupport("excursion died away from x0; killing is not supported there")
    occ += time / kernel.lam
    return ChainExcursionField(occ, x0, rho)


def ray_knight_check(kernel: ChainKernel, x0, rho: float, replicas: int, seed) -> TestReport:
    """Both sides of the stopped-local-time identity, compared per vertex.

    Left side: half the squared field of the chain restricted to D (zero at
    x0) plus an independent excursion occupation stopped at local time rho.
    Right side: half the square of an independent D-restricted field shifted
    by sqrt(2 rho).  The x0 coordinate is the constant rho on both sides and
    is reported without a gate.
    """
    if rho <= 0:
        raise ValueError(f"stopping level must be positive, got {rho}")
    graph = kernel.graph
    x0 = graph.index(x0)
    off = [x for x in range(kernel.n) if x != x0]
    if any(graph.killing[x] > 0 for x in off):
        raise BadSupport("killing must be supported exactly on x0")

    m_d = kernel.energy_matrix[np.ix_(off, off)]
    w, u = np.linalg.eigh(m_d)
    factor_d = (u / np.sqrt(w)) @ u.T  # symmetric square root of the D Green matrix

    rng = as_generator(seed)
    shift = np.sqrt(2.0 * rho)
    lhs = np.empty((replicas, kernel.n))
    rhs = np.empty((replicas, kernel.n))
    for r in range(replicas):
        phi = np.zeros(kernel.n)
        phi[off] = factor_d @ rng.standard_normal(len(off))
        exc = sample_excursion_field(kernel, x0, rho, rng)
        lhs[r] = 0.5 * phi**2 + exc.occupation
        phi2 = np.zeros(kernel.n)
        phi2[off] = factor_d @ rng.standard_normal(len(off))
        phi2[x0] = 0.0
        rhs[r] = 0.5 * (phi2 + shift) ** 2
        rhs[r, x0] = 0.5 * shift**2

    report = TestReport(name="ray-knight", conventions=dict(CONVENTIONS))
    report.meta.update({"x0": graph.vertices[x0], "rho": rho, "replicas": replicas})
    names = graph.vertices
    for x in off:
        report.add_bound(f"KS[{names[x]}]", ks_two_sample(lhs[:, x], rhs[:, x]), 0.02)
        for mom in range(1, 4):
            _two_sample_z(report, f"moment{mom}[{names[x]}]",
                          lhs[:, x] ** mom, rhs[:, x] ** mom)
    report.add_info(f"x0[{names[x0]}] constant", float(np.max(np.abs(lhs[:, x0] - rho))),
                    note="left side at x0 minus rho; right side is rho by construction")
    return report


def _network_statistics(kernel: ChainKernel, replicas: int, seed, stat_fn) -> tuple:
    """Mean and standard error of stat_fn(Network) over intensity-1 ensembles."""
    from .rng import replica_rng

    total = 0.0
    total_sq = 0.0
    base = int(seed)
    for r in range(replicas):
        soup = direct_sample(kernel, 1.0, seed=replica_rng(base, r))
        v = float(stat_fn(jump_matrix(soup)))
        total += v
        total_sq += v * v
    mean = total / replicas
    var = max(total_sq / replicas - mean * mean, 0.0)
    return mean, float(np.sqrt(var / replicas))


def verify_moment_formula(kernel: ChainKernel, edges, points, replicas: int, seed,
                          histogram=None) -> TestReport:
    """Monte Carlo E[prod N_edge prod (N_vertex + 1)] against the closed-form
    complex Wick value prod C prod lam * Per(G block).

    histogram: optional {network key: count} reuse of an existing batch.
    """
    graph = kernel.graph
    edge_idx = [(graph.index(u), graph.index(v)) for u, v in edges]
    point_idx = [graph.index(p) for p in points]
    if len(set(edge_idx)) != len(edge_idx):
        raise DuplicateIndex("oriented edges must be pairwise distinct")
    if len(set(point_idx)) != len(point_idx):
        raise DuplicateIndex("vertices must be pairwise distinct")

    sources = [u for u, _ in edge_idx] + point_idx
    targets = [v for _, v in edge_idx] + point_idx
    closed = complex_wick_moment(kernel, sources, targets)
    for u, v in edge_idx:
        closed *= graph.conductance[u, v]
    for p in point_idx:
        closed *= kernel.lam[p]

    def stat(net) -> float:
        val = 1.0
        for u, v in edge_idx:
            val *= net.counts[u, v]
        out_deg = net.counts.sum(axis=1)
        for p in point_idx:
            val *= out_deg[p] + 1
        return val

    if histogram is not None:
        mean, se, count = _histogram_stat(kernel, histogram, stat)
        replicas = count
    else:
        mean, se = _network_statistics(kernel, replicas, seed, stat)

    name = ",".join(f"{graph.vertices[u]}->{graph.vertices[v]}" for u, v in edge_idx)
    pname = ",".join(graph.vertices[p] for p in point_idx)
    report = TestReport(name="moment-formula", conventions=dict(CONVENTIONS))
    report.meta.update({"edges": name, "points": pname, "replicas": replicas})
    report.add_z(f"E[prod N({name}) prod (N({pname})+1)]", mean, float(closed), se)
    return report


def _histogram_stat(kernel: ChainKernel, histogram: dict, stat_fn) -> tuple:
    from .network import Network

    total = 0.0
    total_sq = 0.0
    count = 0
    for key, c in histogram.items():
        net = Network(kernel.graph, np.array(key, dtype=np.int64))
        v = float(stat_fn(net))
        total += v * c
        total_sq += v * v * c
        count += c
    mean = total / count
    var = max(total_sq / count - mean * mean, 0.0)
    return mean, float(np.sqrt(var / count)), count


def verify_det_identity(kernel: ChainKernel, chi, replicas: int, seed,
                        histogram=None) -> TestReport:
    """Monte Carlo E[det(M_chi D_N - N)] with the lam-normalized diagonal
    chi_x (1 + N_x)/lam_x, against det(M_chi - C) * Per(G)."""
    chi = np.asarray(chi, dtype=float)
    if chi.shape != (kernel.n,):
        raise BadChi(f"chi must be a vector of length {kernel.n}")
    if (chi < kernel.lam - 1e-12).any():
        raise BadChi("chi must dominate lam entrywise")

    target = float(np.linalg.det(np.diag(chi) - kernel.graph.conductance)
                   * permanent(kernel.G))

    lam = kernel.lam

    def stat(net) -> float:
        d = chi * (1.0 + net.counts.sum(axis=1)) / lam
        return float(np.linalg.det(np.diag(d) - net.counts))

    if histogram is not None:
        mean, se, count = _histogram_stat(kernel, histogram, stat)
        replicas = count
    else:
        mean, se = _network_statistics(kernel, replicas, seed, stat)

    report = TestReport(name="det-identity", conventions=dict(CONVENTIONS))
    report.meta.update({"chi": chi.tolist(), "replicas": replicas})
    report.add_z("E[det(M_chi D_N - N)]", mean, target, se,
                 note="diagonal chi_x (1+N_x)/lam_x")
    return report
