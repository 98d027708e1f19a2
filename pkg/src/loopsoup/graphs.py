"""Finite weighted graphs with killing and the derived sub-Markov chain data.

A graph is a list of vertices, symmetric positive conductances on unordered
edges, and a nonnegative killing measure on vertices.  The chain quantities
built from it:

    lam[x]     = sum_y C[x, y] + killing[x]
    P[x, y]    = C[x, y] / lam[y]
    G          = (M_lam - C)^(-1)
    det(I - P) = det(M_lam - C) / prod(lam)

M_lam - C must be positive definite (transience); it is singular exactly when
the killing vanishes identically on a connected component.  Everything here is
dense; target graphs are desk scale, tens of vertices at most.
"""

from __future__ import annotations

import json
from bisect import bisect_right
from dataclasses import dataclass, fields as _dc_fields
from functools import cached_property
from typing import Mapping, Sequence

import numpy as np

from .errors import BadForm, BadGraph, NonTransient

PIVOT_EPS = 1e-12


def _as_float(value, where: str) -> float:
    try:
        out = float(value)
    except (TypeError, ValueError):
        raise BadGraph(f"{where}: expected a number, got {value!r}") from None
    if not np.isfinite(out):
        raise BadGraph(f"{where}: expected a finite number, got {value!r}")
    return out


@dataclass(frozen=True, eq=False)
class WeightedGraph:
    """Vertex names, symmetric conductance matrix, killing measure."""

    vertices: tuple[str, ...]
    conductance: np.ndarray
    killing: np.ndarray

    @classmethod
    def build(cls, vertices, edges, killing=None) -> "WeightedGraph":
        """Validate raw data and construct a graph.

        vertices: iterable of names.  edges: iterable of (u, v, c) with c > 0.
        killing: mapping name -> nonnegative rate; missing names mean zero.
        """
        names = tuple(str(v) for v in vertices)
        if not names:
            raise BadGraph("vertices: must be nonempty")
        if len(set(names)) != len(names):
            raise BadGraph("vertices: names must be distinct")
        index = {v: i for i, v in enumerate(names)}
        n = len(names)
        cond = np.zeros((n, n))
        for pos, edge in enumerate(edges):
            try:
                u, v, c = edge
            except (TypeError, ValueError):
                raise BadGraph(f"edges[{pos}]: expected (u, v, c)") from None
            u, v = str(u), str(v)
            if u not in index:
                raise BadGraph(f"edges[{pos}].u: unknown vertex {u!r}")
            if v not in index:
                raise BadGraph(f"edges[{pos}].v: unknown vertex {v!r}")
            if u == v:
                raise BadGraph(f"edges[{pos}]: self-loop at {u!r} not allowed")
            cval = _as_float(c, f"edges[{pos}].c")
            if cval <= 0:
                raise BadGraph(f"edges[{pos}].c: conductance must be > 0, got {cval}")
            i, j = index[u], index[v]
            if cond[i, j] != 0:
                raise BadGraph(f"edges[{pos}]: duplicate edge {u!r}-{v!r}")
            cond[i, j] = cond[j, i] = cval
        kap = np.zeros(n)
        for name, value in (killing or {}).items():
            name = str(name)
            if name not in index:
                raise BadGraph(f"killing[{name!r}]: unknown vertex")
            kval = _as_float(value, f"killing[{name!r}]")
            if kval < 0:
                raise BadGraph(f"killing[{name!r}]: must be >= 0, got {kval}")
            kap[index[name]] = kval
        if not np.any(kap > 0):
            raise BadGraph("killing vanishes everywhere; the chain cannot be transient")
        cond.setflags(write=False)
        kap.setflags(write=False)
        return cls(vertices=names, conductance=cond, killing=kap)

    @classmethod
    def from_json_file(cls, path) -> "WeightedGraph":
        try:
            with open(path) as fh:
                data = json.load(fh)
        except json.JSONDecodeError as exc:
            raise BadGraph(f"graph file {path}: invalid JSON at line {exc.lineno} column {exc.colno}") from None
        return cls.from_json_dict(data, where=f"graph file {path}")

    @classmethod
    def from_json_dict(cls, data, where: str = "graph data") -> "WeightedGraph":
        if not isinstance(data, dict):
            raise BadGraph(f"{where}: top level must be an object")
        for key in ("vertices", "edges"):
            if key not in data:
                raise BadGraph(f"{where}: missing required field {key!r}")
        edges = []
        for pos, e in enumerate(data["edges"]):
            if not isinstance(e, dict) or not {"u", "v", "c"} <= set(e):
                raise BadGraph(f"{where}: edges[{pos}] must be an object with u, v, c")
            edges.append((e["u"], e["v"], e["c"]))
        try:
            return cls.build(data["vertices"], edges, data.get("killing", {}))
        except BadGraph as exc:
            raise BadGraph(f"{where}: {exc}") from None

    def to_json_dict(self) -> dict:
        return {
            "vertices": list(self.vertices),
            "edges": [
                {"u": self.vertices[i], "v": self.vertices[j], "c": float(self.conductance[i, j])}
                for i, j in self.edge_pairs
            ],
            "killing": {
                self.vertices[i]: float(k) for i, k in enumerate(self.killing) if k > 0
            },
        }

    @property
    def n(self) -> int:
        return len(self.vertices)

    @cached_property
    def _index(self) -> dict:
        return {v: i for i, v in enumerate(self.vertices)}

    def index(self, vertex) -> int:
        """Resolve a vertex name or integer index to an index."""
        if isinstance(vertex, (int, np.integer)):
            i = int(vertex)
            if not 0 <= i < self.n:
                raise BadGraph(f"vertex index {i} out of range")
            return i
        try:
            return self._index[str(vertex)]
        except KeyError:
            raise BadGraph(f"unknown vertex {vertex!r}") from None

    @cached_property
    def edge_pairs(self) -> tuple[tuple[int, int], ...]:
        """Undirected edges as index pairs (i, j) with i < j, in lexicographic order."""
        n = self.n
        return tuple(
            (i, j) for i in range(n) for j in range(i + 1, n) if self.conductance[i, j] > 0
        )

    def as_vector(self, f) -> np.ndarray:
        """Coerce a vertex function (mapping by name or sequence by order) to an array."""
        if isinstance(f, Mapping):
            out = np.zeros(self.n, dtype=complex)
            for k, v in f.items():
                out[self.index(k)] = v
        else:
            out = np.asarray(f)
            if out.shape != (self.n,):
                raise BadGraph(f"vertex function has shape {out.shape}, expected ({self.n},)")
        if np.iscomplexobj(out) and np.allclose(out.imag, 0.0):
            out = out.real
        return out.astype(complex) if np.iscomplexobj(out) else out.astype(float)

    def is_connected(self) -> bool:
        n = self.n
        seen = np.zeros(n, dtype=bool)
        stack = [0]
        seen[0] = True
        while stack:
            x = stack.pop()
            for y in np.flatnonzero(self.conductance[x] > 0):
                if not seen[y]:
                    seen[y] = True
                    stack.append(int(y))
        return bool(seen.all())


def energy(graph: WeightedGraph, f, h) -> float | complex:
    """Dirichlet energy form: half the sum of C[x,y] (f(x)-f(y)) conj(h(x)-h(y))
    over ordered pairs, plus the killing term.  Sesquilinear in (f, h)."""
    fv = graph.as_vector(f)
    hv = graph.as_vector(h)
    lam = graph.conductance.sum(axis=1) + graph.killing
    m = np.diag(lam) - graph.conductance
    val = np.conj(hv) @ m @ fv
    if np.iscomplexobj(fv) or np.iscomplexobj(hv):
        return complex(val)
    return float(np.real(val))


def twisted_energy(graph: WeightedGraph, omega, f) -> float:
    """Energy form twisted by the unitary phase exp(2 pi i omega).

    omega is a real antisymmetric matrix indexed by ordered vertex pairs.
    The twisted form is Hermitian and nonnegative for any such omega, so
    the value is real.
    """
    omega = np.asarray(omega, dtype=float)
    if omega.shape != (graph.n, graph.n):
        raise BadForm(f"one-form must be {graph.n}x{graph.n}, got shape {omega.shape}")
    if not np.allclose(omega, -omega.T, atol=1e-12, rtol=0.0):
        raise BadForm("one-form must be antisymmetric")
    fv = graph.as_vector(f).astype(complex)
    lam = graph.conductance.sum(axis=1) + graph.killing
    m = np.diag(lam).astype(complex) - graph.conductance * np.exp(2j * np.pi * omega)
    val = np.vdot(fv, m @ fv)
    return float(val.real)


@dataclass(frozen=True)
class EnergyForm:
    """Callable wrapper around the (possibly twisted) Dirichlet form of a graph."""

    graph: WeightedGraph

    def bilinear(self, f, h):
        return energy(self.graph, f, h)

    def quadratic(self, f):
        return energy(self.graph, f, f)

    def twisted(self, omega, f) -> float:
        return twisted_energy(self.graph, omega, f)


@dataclass(frozen=True, eq=False)
class ChainKernel:
    """Transition matrix, Green's function and derived tables of a transient chain.

    Immutable after construction; lazy caches only memoize pure functions of the
    fields, so sharing across threads or pickling to workers is safe.
    """

    graph: WeightedGraph
    lam: np.ndarray
    P: np.ndarray
    G: np.ndarray
    energy_matrix: np.ndarray
    det_i_minus_p: float
    log_det_i_minus_p: float

    def __getstate__(self):
        names = {f.name for f in _dc_fields(self)}
        return {k: v for k, v in self.__dict__.items() if k in names}

    def __setstate__(self, state):
        self.__dict__.update(state)

    @property
    def n(self) -> int:
        return self.graph.n

    @property
    def mu_mass(self) -> float:
        """Total measure of nontrivial loops, -log det(I - P)."""
        return -self.log_det_i_minus_p

    @cached_property
    def q_matrix(self) -> np.ndarray:
        """Row-normalized jump matrix C[x,y]/lam[x] used to simulate the chain.

        Diagonally similar to P, so all traces, determinants and closed-loop
        products agree between the two normalizations.
        """
        return self.graph.conductance / self.lam[:, None]

    @cached_property
    def death_prob(self) -> np.ndarray:
        return self.graph.killing / self.lam

    @cached_property
    def sym_eigs(self) -> np.ndarray:
        """Eigenvalues of the symmetrized jump matrix, all inside (-1, 1)."""
        s = 1.0 / np.sqrt(self.lam)
        return np.linalg.eigvalsh(self.graph.conductance * np.outer(s, s))

    @cached_property
    def _walk_tables(self) -> list:
        tables = []
        for x in range(self.n):
            targets = np.flatnonzero(self.graph.conductance[x] > 0)
            cum = np.cumsum(self.graph.conductance[x, targets]) / self.lam[x]
            tables.append((targets.tolist(), cum.tolist()))
        return tables

    def walk_step(self, x: int, rng: np.random.Generator) -> int:
        """One jump of the chain from x; returns the target index or -1 for death."""
        targets, cum = self._walk_tables[x]
        u = rng.random()
        i = bisect_right(cum, u)
        if i >= len(targets):
            return -1
        return targets[i]

    @cached_property
    def _q_powers(self) -> list:
        return [np.eye(self.n), np.array(self.q_matrix)]

    def q_powers(self, up_to: int) -> list:
        """Powers [I, Q, ..., Q^up_to] of the jump matrix, grown on demand."""
        pows = self._q_powers
        while len(pows) <= up_to:
            pows.append(pows[-1] @ pows[1])
        return pows

    @cached_property
    def _length_cache(self) -> dict:
        return {}

    def length_distribution(self, eps: float):
        """Cumulative law of the jump count of a loop, cut at total tail mass eps.

        Returns (cum, total_mass, n_max, discarded): cum[k] is the cumulative
        normalized probability of length k+2, total_mass the retained loop
        measure, discarded the cut tail mass (< eps).
        """
        from .errors import TailTooHeavy

        if not 0 < eps <= 1e-6:
            raise ValueError(f"tail cut must be in (0, 1e-6], got {eps}")
        cached = self._length_cache.get(eps)
        if cached is not None:
            return cached
        w = self.sym_eigs
        mprime = float(-np.sum(np.log1p(-w)))
        terms = []
        partial = 0.0
        n = 1
        while mprime - partial > eps:
            n += 1
            if n > 10_000:
                raise TailTooHeavy(
                    f"loop-length tail cannot be cut to {eps} within 10^4 steps"
                )
            t = max(float(np.sum(w**n)) / n, 0.0)
            terms.append(t)
            partial += t
        total = partial
        cum = np.cumsum(terms) / total if terms else np.zeros(0)
        out = (cum, total, n, mprime - partial)
        self._length_cache[eps] = out
        return out

    def twisted_matrix(self, z: np.ndarray) -> np.ndarray:
        """M_lam - C * z for an entrywise edge modifier z."""
        return np.diag(self.lam).astype(complex) - self.graph.conductance * np.asarray(z)

    def det_i_minus_pz(self, z: np.ndarray) -> complex:
        """det(I - P^z) computed stably through the twisted energy matrix."""
        sign, logabs = np.linalg.slogdet(self.twisted_matrix(z))
        if logabs == -np.inf:
            return 0.0 + 0.0j
        return complex(sign * np.exp(logabs - np.sum(np.log(self.lam))))

    @cached_property
    def field_factor(self) -> np.ndarray:
        """Symmetric square root of the Green's function, for field sampling."""
        w, u = np.linalg.eigh(self.G)
        w = np.clip(w, 0.0, None)
        return (u * np.sqrt(w)) @ u.T


def build_kernel(graph: WeightedGraph) -> ChainKernel:
    """Derive lam, P, G and det(I - P) from a graph, checking transience."""
    lam = graph.conductance.sum(axis=1) + graph.killing
    m = np.diag(lam) - graph.conductance
    w = np.linalg.eigvalsh(m)
    if w[0] <= PIVOT_EPS * max(1.0, abs(float(w[-1]))):
        raise NonTransient(
            "energy form is not positive definite; killing vanishes on some connected component"
        )
    green = np.linalg.inv(m)
    green = (green + green.T) / 2.0
    p = graph.conductance / lam[None, :]
    log_dimp = float(np.sum(np.log(w)) - np.sum(np.log(lam)))
    for arr in (lam, m, green, p):
        arr.setflags(write=False)
    return ChainKernel(
        graph=graph,
        lam=lam,
        P=p,
        G=green,
        energy_matrix=m,
        det_i_minus_p=float(np.exp(log_dimp)),
        log_det_i_minus_p=log_dimp,
    )
