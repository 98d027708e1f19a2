"""Small exact combinatorial kernels: permanents, alpha-permanents, tree and
arborescence counts.

Everything here enumerates or eliminates exactly; sizes are capped so a call
either finishes fast or raises TooLarge up front.
"""

from __future__ import annotations

from itertools import permutations

import numpy as np

from .errors import Disconnected, EmptyNetwork, TooLarge
from .graphs import WeightedGraph
from .network import Network

PERMANENT_CAP = 20
ALPHA_PERMANENT_CAP = 10


def det_complex(a) -> complex:
    """Determinant of a complex matrix; thin wrapper kept for a uniform API."""
    return complex(np.linalg.det(np.asarray(a, dtype=complex)))


def permanent(a) -> float | complex:
    """Permanent by Ryser's formula with Gray-code subset updates, O(2^n n)."""
    a = np.asarray(a)
    n = a.shape[0]
    if a.shape != (n, n):
        raise ValueError(f"matrix must be square, got shape {a.shape}")
    if n > PERMANENT_CAP:
        raise TooLarge(f"permanent limited to {PERMANENT_CAP}x{PERMANENT_CAP}, got n={n}")
    if n == 0:
        return 1.0
    row_sums = np.zeros(n, dtype=complex if np.iscomplexobj(a) else float)
    total = 0.0 + 0.0j if np.iscomplexobj(a) else 0.0
    gray = 0
    for k in range(1, 1 << n):
        # flip the lowest bit that changes between consecutive Gray codes
        bit = (k & -k).bit_length() - 1
        mask = 1 << bit
        if gray & mask:
            row_sums -= a[:, bit]
        else:
            row_sums += a[:, bit]
        gray ^= mask
        sign = -1 if (n - bin(gray).count("1")) % 2 else 1
        total += sign * np.prod(row_sums)
    return complex(total) if np.iscomplexobj(a) else float(total)


def _cycle_count(perm: tuple) -> int:
    n = len(perm)
    seen = [False] * n
    cycles = 0
    for i in range(n):
        if seen[i]:
            continue
        cycles += 1
        j = i
        while not seen[j]:
            seen[j] = True
            j = perm[j]
    return cycles


def alpha_permanent(a, alpha: float) -> float | complex:
    """Sum over permutations of alpha^(cycle count) times the matrix product.

    alpha = 1 gives the permanent, alpha = -1 gives (-1)^n det.  Brute force
    over n! permutations, so n is capped hard.
    """
    a = np.asarray(a)
    n = a.shape[0]
    if a.shape != (n, n):
        raise ValueError(f"matrix must be square, got shape {a.shape}")
    if n > ALPHA_PERMANENT_CAP:
        raise TooLarge(
            f"alpha-permanent limited to {ALPHA_PERMANENT_CAP}x{ALPHA_PERMANENT_CAP}, got n={n}"
        )
    if n == 0:
        return 1.0
    total = 0.0 + 0.0j if np.iscomplexobj(a) else 0.0
    for perm in permutations(range(n)):
        prod = 1.0
        for i in range(n):
            prod = prod * a[i, perm[i]]
            if prod == 0:
                break
        if prod != 0:
            total += (alpha ** _cycle_count(perm)) * prod
    return complex(total) if np.iscomplexobj(a) else float(total)


def spanning_tree_weight_sum(graph: WeightedGraph) -> float:
    """Sum over spanning trees of the product of edge conductances.

    Matrix-tree: any principal minor of the conductance Laplacian.  A single
    vertex has the one empty tree, weight 1.
    """
    if not graph.is_connected():
        raise Disconnected("graph has no spanning tree")
    n = graph.n
    if n == 1:
        return 1.0
    deg = graph.conductance.sum(axis=1)
    lap = np.diag(deg) - graph.conductance
    sign, logabs = np.linalg.slogdet(lap[1:, 1:])
    if sign <= 0:
        raise Disconnected("conductance Laplacian minor is singular")
    return float(np.exp(logabs))


def arborescence_count(network: Network, root) -> int:
    """Number of arborescences of the network's support digraph oriented
    toward the root, counted with edge multiplicity.

    Directed matrix-tree on the multigraph whose arc multiplicities are the
    crossing counts.  Returns 0 if the root cannot be reached.
    """
    if network.total == 0:
        raise EmptyNetwork("cannot count arborescences of an empty network")
    root = network.graph.index(root)
    sup = [int(v) for v in network.support]
    if root not in sup:
        return 0
    k = network.counts[np.ix_(sup, sup)].astype(float)
    # Laplacian for arborescences toward the root: out-degree on the diagonal
    lap = np.diag(k.sum(axis=1)) - k
    keep = [i for i, v in enumerate(sup) if v != root]
    if not keep:
        return 1
    minor = lap[np.ix_(keep, keep)]
    val = float(np.linalg.det(minor))
    out = int(round(val))
    if abs(val - out) > 1e-6 * max(1.0, abs(val)):
        raise ArithmeticError(f"arborescence determinant {val} is not close to an integer")
    return max(out, 0)
