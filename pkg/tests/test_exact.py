"""Determinants, permanents, alpha-permanents, tree and arborescence counts."""

import itertools

import numpy as np
import pytest

from loopsoup import (
    Disconnected,
    EmptyNetwork,
    Network,
    TooLarge,
    WeightedGraph,
    alpha_permanent,
    arborescence_count,
    det_complex,
    permanent,
    spanning_tree_weight_sum,
)


def test_det_complex(two_point_kernel):
    assert det_complex(np.eye(2) - two_point_kernel.P) == pytest.approx(0.75)
    z = 0.5 + 0.5j
    m = np.eye(2) - z * two_point_kernel.P
    assert det_complex(m) == pytest.approx(1 - z**2 / 4)


def test_permanent_small():
    assert permanent(np.array([[3.0]])) == pytest.approx(3.0)
    assert permanent(np.array([[1.0, 2.0], [3.0, 4.0]])) == pytest.approx(10.0)
    assert permanent(np.ones((4, 4))) == pytest.approx(24.0)
    g = np.array([[2 / 3, 1 / 3], [1 / 3, 2 / 3]])
    assert permanent(g) == pytest.approx(5 / 9)


def test_permanent_matches_brute_force():
    rng = np.random.default_rng(3)
    a = rng.normal(size=(5, 5)) + 1j * rng.normal(size=(5, 5))
    brute = sum(
        np.prod([a[i, p[i]] for i in range(5)])
        for p in itertools.permutations(range(5))
    )
    assert permanent(a) == pytest.approx(brute)


def test_permanent_cap():
    with pytest.raises(TooLarge):
        permanent(np.ones((21, 21)))


def test_alpha_permanent_collapses():
    rng = np.random.default_rng(4)
    a = rng.normal(size=(4, 4))
    assert alpha_permanent(a, 1.0) == pytest.approx(permanent(a))
    assert alpha_permanent(a, -1.0) == pytest.approx((-1) ** 4 * np.linalg.det(a))
    # single cycle count on a 1x1 matrix: the value is alpha * entry
    assert alpha_permanent(np.array([[2.0]]), 0.5) == pytest.approx(1.0)


def test_alpha_permanent_two_by_two():
    a = np.array([[1.0, 2.0], [3.0, 4.0]])
    # identity permutation has two cycles, the swap has one
    for alpha in (0.5, 2.0, 3.5):
        assert alpha_permanent(a, alpha) == pytest.approx(alpha**2 * 4 + alpha * 6)


def test_spanning_tree_weight_sum(two_point, triangle):
    assert spanning_tree_weight_sum(two_point) == pytest.approx(1.0)
    assert spanning_tree_weight_sum(triangle) == pytest.approx(3.0)
    g = WeightedGraph.build(
        ("a", "b", "c"),
        (("a", "b", 1.0), ("a", "c", 2.0), ("b", "c", 3.0)),
        {"a": 1.0},
    )
    # three trees: ab*ac + ab*bc + ac*bc = 2 + 3 + 6
    assert spanning_tree_weight_sum(g) == pytest.approx(11.0)
    single = WeightedGraph.build(("a",), (), {"a": 1.0})
    assert spanning_tree_weight_sum(single) == pytest.approx(1.0)


def test_spanning_tree_disconnected():
    g = WeightedGraph.build(
        ("a", "b", "c", "d"), (("a", "b", 1.0), ("c", "d", 1.0)), {"a": 1.0, "c": 1.0}
    )
    with pytest.raises(Disconnected):
        spanning_tree_weight_sum(g)


def test_spanning_tree_monotone_in_conductance(triangle):
    heavier = WeightedGraph.build(
        ("a", "b", "c"),
        (("a", "b", 2.0), ("a", "c", 1.0), ("b", "c", 1.0)),
        {"a": 1.0},
    )
    assert spanning_tree_weight_sum(heavier) > spanning_tree_weight_sum(triangle)


def _net(graph, entries):
    n = graph.n
    c = np.zeros((n, n), dtype=np.int64)
    for (i, j), v in entries.items():
        c[i, j] = v
    return Network(graph, c)


def test_arborescence_count(two_point, triangle):
    two_cycle = _net(two_point, {(0, 1): 2, (1, 0): 2})
    # rooted at either end: choose one of the two parallel edges into the root
    assert arborescence_count(two_cycle, "a") == 2
    assert arborescence_count(two_cycle, "b") == 2
    tri = _net(triangle, {(0, 1): 1, (1, 2): 1, (2, 0): 1})
    assert arborescence_count(tri, "a") == 1
    assert arborescence_count(tri, "b") == 1
    both = _net(triangle, {(0, 1): 1, (1, 2): 1, (2, 0): 1,
                           (1, 0): 1, (2, 1): 1, (0, 2): 1})
    assert arborescence_count(both, "a") == 3


def test_arborescence_brute_force(triangle, complete4):
    rng = np.random.default_rng(9)
    for graph in (triangle, complete4):
        n = graph.n
        for _ in range(6):
            c = np.zeros((n, n), dtype=np.int64)
            for i, j in graph.edge_pairs:
                c[i, j] = rng.integers(0, 3)
                c[j, i] = rng.integers(0, 3)
            if c.sum() == 0:
                continue
            net = Network(graph, c)
            support = [x for x in range(n) if c[x].sum() + c[:, x].sum() > 0]
            root = support[0]
            # brute force: parent maps over the support, acyclic toward root,
            # weighted by edge multiplicities
            others = [x for x in support if x != root]
            count = 0
            for parents in itertools.product(support, repeat=len(others)):
                weight = 1
                for child, parent in zip(others, parents):
                    weight *= int(c[child, parent])
                if weight == 0:
                    continue
                reach = all(_reaches(dict(zip(others, parents)), x, root) for x in others)
                if reach:
                    count += weight
            assert arborescence_count(net, root) == count


def _reaches(parent_of, start, root, limit=16):
    x = start
    for _ in range(limit):
        if x == root:
            return True
        x = parent_of.get(x)
        if x is None:
            return False
    return False


def test_arborescence_errors(two_point):
    with pytest.raises(EmptyNetwork):
        arborescence_count(Network.zeros(two_point), "a")
    # a root off the support has no incoming arborescence
    g3 = WeightedGraph.build(
        ("a", "b", "c"), (("a", "b", 1.0), ("b", "c", 1.0)), {"a": 1.0}
    )
    loop_ab = _net(g3, {(0, 1): 1, (1, 0): 1})
    assert arborescence_count(loop_ab, "c") == 0
