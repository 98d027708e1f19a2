"""Crossing-count networks: validation, exact laws, tours, measures, flows."""

import math

import numpy as np
import pytest

from loopsoup import (
    BadForm,
    BadGraph,
    BadPartition,
    BudgetExceeded,
    DisconnectedSupport,
    ModifierMatrix,
    Network,
    NotEulerian,
    TooLarge,
    WeightedGraph,
    ZeroNetwork,
    best_tour_count,
    build_kernel,
    enumerate_eulerian,
    exact_network_prob_alpha,
    exact_network_prob_alpha1,
    generating_function,
    max_flow,
    mu_network_measure,
    verify_poisson_convolution,
)
from loopsoup.verify import _all_balanced_up_to, nb_pmf


def _two_point_net(graph, n):
    counts = np.zeros((2, 2), dtype=np.int64)
    counts[0, 1] = counts[1, 0] = n
    return Network(graph, counts)


def _directed_triangle(graph):
    counts = np.zeros((3, 3), dtype=np.int64)
    counts[0, 1] = counts[1, 2] = counts[2, 0] = 1
    return Network(graph, counts)


# ---------------------------------------------------------------- validation


def test_network_validation(two_point, triangle):
    with pytest.raises(BadGraph):
        Network(two_point, np.zeros((3, 3), dtype=np.int64))
    with pytest.raises(BadGraph):
        Network(two_point, np.array([[0.0, 0.5], [0.5, 0.0]]))
    with pytest.raises(BadGraph):
        Network(two_point, np.array([[0, -1], [1, 0]]))
    with pytest.raises(BadGraph):
        Network(two_point, np.array([[1, 0], [0, 0]]))  # diagonal
    bad = np.zeros((3, 3), dtype=np.int64)
    # path graph below has no a-c edge; triangle does, so build a path
    path = WeightedGraph.build(("a", "b", "c"), (("a", "b", 1.0), ("b", "c", 1.0)), {"a": 1.0})
    bad[0, 2] = 1
    with pytest.raises(BadGraph):
        Network(path, bad)
    # integral floats are accepted and coerced
    net = Network(two_point, np.array([[0.0, 2.0], [2.0, 0.0]]))
    assert net.counts.dtype == np.int64
    assert net.total == 4


def test_network_accessors(two_point):
    net = _two_point_net(two_point, 3)
    assert net.is_eulerian()
    assert list(net.out_degrees) == [3, 3]
    assert list(net.support) == [0, 1]
    assert net.support_connected()
    unbal = Network(two_point, np.array([[0, 2], [1, 0]]))
    assert not unbal.is_eulerian()
    both = net + _two_point_net(two_point, 1)
    assert both.total == 8
    rt = Network.from_json_dict(two_point, net.to_json_dict())
    assert rt == net
    assert Network.zeros(two_point).total == 0


def test_disconnected_support():
    g = WeightedGraph.build(
        ("a", "b", "c", "d"),
        (("a", "b", 1.0), ("b", "c", 1.0), ("c", "d", 1.0)),
        {"a": 1.0},
    )
    counts = np.zeros((4, 4), dtype=np.int64)
    counts[0, 1] = counts[1, 0] = 1
    counts[2, 3] = counts[3, 2] = 1
    net = Network(g, counts)
    assert net.is_eulerian()
    assert not net.support_connected()
    with pytest.raises(DisconnectedSupport):
        best_tour_count(net)
    # a one-loop measure cannot split across components
    assert mu_network_measure(build_kernel(g), net) == 0.0


# ------------------------------------------------------------ edge modifiers


def test_modifier_validation():
    with pytest.raises(BadForm):
        ModifierMatrix(np.array([[1.0, 1j], [1j, 1.0]]))  # not Hermitian
    with pytest.raises(BadForm):
        ModifierMatrix(np.array([[1.0, 2.0], [2.0, 1.0]]))  # modulus > 1
    z = ModifierMatrix.from_edge_value(2, 0, 1, 0.5j)
    assert z.entries[1, 0] == pytest.approx(-0.5j)
    with pytest.raises(BadForm):
        ModifierMatrix.from_one_form(np.array([[0.0, 0.2], [0.2, 0.0]]))
    w = ModifierMatrix.from_one_form(np.array([[0.0, 0.25], [-0.25, 0.0]]))
    assert w.entries[0, 1] == pytest.approx(1j)


def test_generating_function_closed_forms(two_point_kernel):
    # all-ones modifier is the total mass
    assert generating_function(two_point_kernel, ModifierMatrix.ones(2), 1.0) == pytest.approx(1.0)
    # zero modifier picks out P(N = 0) = det(I - P)^alpha
    zero = ModifierMatrix(np.zeros((2, 2)))
    for alpha in (0.5, 1.0, 2.0):
        assert generating_function(two_point_kernel, zero, alpha) == pytest.approx(0.75**alpha)
    # real scalar s on the single edge: E s^(2N) with N geometric(3/4) on {0,1,...}
    for s in (0.3, 0.7, 1.0):
        val = generating_function(
            two_point_kernel, ModifierMatrix.from_edge_value(2, 0, 1, s), 1.0
        )
        assert val == pytest.approx((3 / 4) / (1 - s * s / 4))


def test_generating_function_unimodular_bounded(triangle_kernel):
    # characteristic-function property: |value| <= 1 on unit-modulus twists
    rng = np.random.default_rng(9)
    for _ in range(20):
        omega = rng.uniform(-0.5, 0.5, size=(3, 3))
        omega = omega - omega.T
        z = ModifierMatrix.from_one_form(omega)
        for alpha in (0.5, 1.0, 2.0):
            assert abs(generating_function(triangle_kernel, z, alpha)) <= 1.0 + 1e-12


# ------------------------------------------------------------- exact network


def test_exact_prob_factorial_route(two_point, two_point_kernel):
    for n in range(4):
        p = exact_network_prob_alpha1(two_point_kernel, _two_point_net(two_point, n))
        assert p == pytest.approx((3 / 4) * (1 / 4) ** n)
    with pytest.raises(NotEulerian):
        exact_network_prob_alpha1(
            two_point_kernel, Network(two_point, np.array([[0, 1], [0, 0]]))
        )


def test_exact_prob_alpha_route_vs_nb(two_point, two_point_kernel):
    # the single-edge network law is negative binomial in the crossing count
    for alpha in (0.5, 1.0, 2.0):
        for n in range(4):
            p = exact_network_prob_alpha(two_point_kernel, _two_point_net(two_point, n), alpha)
            assert p == pytest.approx(nb_pmf(n, alpha, 1 / 4), abs=1e-12)


def test_exact_prob_routes_agree_triangle(triangle, triangle_kernel):
    for net in _all_balanced_up_to(triangle, 4):
        if net.total == 0:
            continue
        p1 = exact_network_prob_alpha1(triangle_kernel, net)
        pa = exact_network_prob_alpha(triangle_kernel, net, 1.0)
        assert pa == pytest.approx(p1, abs=1e-12)


def test_exact_prob_alpha_cap(two_point, two_point_kernel):
    with pytest.raises(TooLarge):
        exact_network_prob_alpha(two_point_kernel, _two_point_net(two_point, 5), 1.0)


# -------------------------------------------------------------- enumeration


def test_enumerate_two_point(two_point_kernel):
    entries = enumerate_eulerian(two_point_kernel, 1e-3)
    assert len(entries) == 5
    total = sum(e.probability for e in entries)
    assert total == pytest.approx(1 - (1 / 4) ** 5)
    # layers are complete and ordered by size
    sizes = [e.network.total for e in entries]
    assert sizes == sorted(sizes)


def test_enumerate_single_vertex(single_vertex_kernel):
    entries = enumerate_eulerian(single_vertex_kernel, 1e-3)
    assert len(entries) == 1
    assert entries[0].probability == pytest.approx(1.0)


def test_enumerate_bad_delta(two_point_kernel):
    for delta in (0.0, -1e-3, 0.02):
        with pytest.raises(ValueError):
            enumerate_eulerian(two_point_kernel, delta)


def test_enumerate_budget_exceeded(triangle_kernel):
    # the triangle tail past |k| = 20 still holds more than 1e-4 of the mass
    with pytest.raises(BudgetExceeded):
        enumerate_eulerian(triangle_kernel, 1e-4)


# -------------------------------------------------------------------- tours


def test_best_tour_count_oracles(two_point, triangle):
    assert best_tour_count(_two_point_net(two_point, 1)) == 2
    assert best_tour_count(_two_point_net(two_point, 2)) == 8
    assert best_tour_count(_directed_triangle(triangle)) == 3
    with pytest.raises(ZeroNetwork):
        best_tour_count(Network.zeros(two_point))
    with pytest.raises(NotEulerian):
        best_tour_count(Network(two_point, np.array([[0, 2], [1, 0]])))


def test_best_matches_brute_force(triangle):
    from loopsoup.verify import brute_force_tour_count

    for net in _all_balanced_up_to(triangle, 5):
        if net.total == 0 or not net.support_connected():
            continue
        assert best_tour_count(net) == brute_force_tour_count(net)


# ------------------------------------------------------------- loop measure


def test_mu_measure_oracles(two_point, triangle, two_point_kernel, triangle_kernel):
    assert mu_network_measure(two_point_kernel, _two_point_net(two_point, 1)) == pytest.approx(1 / 4)
    assert mu_network_measure(two_point_kernel, _two_point_net(two_point, 2)) == pytest.approx(1 / 32)
    assert mu_network_measure(triangle_kernel, _directed_triangle(triangle)) == pytest.approx(1 / 27)
    with pytest.raises(ZeroNetwork):
        mu_network_measure(two_point_kernel, Network.zeros(two_point))


def test_mu_partial_sums(two_point, two_point_kernel):
    # n round trips carry measure (1/4)^n / n; the series sums to -log det(I-P)
    total = 0.0
    for n in range(1, 41):
        total += mu_network_measure(two_point_kernel, _two_point_net(two_point, n))
    assert total == pytest.approx(-math.log(3 / 4), abs=1e-12)


# -------------------------------------------------------------- convolution


def test_poisson_convolution(two_point_kernel, triangle_kernel):
    rep = verify_poisson_convolution(two_point_kernel, 1e-6)
    assert rep.passed
    assert rep.lines[0].lhs < 1e-12
    rep3 = verify_poisson_convolution(triangle_kernel, 1e-3)
    assert rep3.passed


# ----------------------------------------------------------------- max flow


def test_max_flow_oracles(two_point, triangle):
    assert max_flow(_two_point_net(two_point, 3), ["a"], ["b"]) == 3
    assert max_flow(Network.zeros(two_point), ["a"], ["b"]) == 0
    assert max_flow(_directed_triangle(triangle), ["a"], ["c"]) == 1
    with pytest.raises(BadPartition):
        max_flow(Network.zeros(two_point), [], ["b"])
    with pytest.raises(BadPartition):
        max_flow(Network.zeros(two_point), ["a"], ["a"])


def test_max_flow_min_cut(triangle):
    # both rotations available: two edge-disjoint a -> c routes
    counts = np.zeros((3, 3), dtype=np.int64)
    counts[0, 1] = counts[1, 2] = counts[2, 0] = 1
    counts[0, 2] = counts[2, 1] = counts[1, 0] = 1
    assert max_flow(Network(triangle, counts), ["a"], ["c"]) == 2


# ------------------------------------------------- edge-ordering invariant


def _canonical_word(word):
    p = len(word)
    rotations = [word[r:] + word[:r] for r in range(p)]
    return min(rotations)


def _word_symmetry(word):
    p = len(word)
    return sum(1 for r in range(p) if word[r:] + word[:r] == word)


def _word_counts(word, n):
    counts = np.zeros((n, n), dtype=np.int64)
    for i, u in enumerate(word):
        counts[u, word[(i + 1) % len(word)]] += 1
    return counts


def _closed_words(budget):
    """Distinct cyclic vertex words whose step counts fit inside the budget."""
    n = budget.shape[0]
    cap = int(budget.sum())
    words = set()

    def extend(start, cur, path, used):
        for nxt in range(n):
            if used[cur, nxt] >= budget[cur, nxt]:
                continue
            if nxt == start:
                words.add(_canonical_word(tuple(path)))
            if len(path) < cap:
                used[cur, nxt] += 1
                path.append(nxt)
                extend(start, nxt, path, used)
                path.pop()
                used[cur, nxt] -= 1

    for start in range(n):
        extend(start, start, [start], np.zeros_like(budget))
    return sorted(words)


def _weighted_decompositions(net):
    """Sum over loop multisets inducing net of prod 1/(mult! sym^mult)."""
    words = _closed_words(net.counts)
    n = net.graph.n
    deltas = [_word_counts(w, n) for w in words]
    syms = [_word_symmetry(w) for w in words]
    total = 0.0

    def rec(i, remaining, weight):
        nonlocal total
        if not remaining.any():
            total += weight
            return
        if i == len(words):
            return
        rec(i + 1, remaining, weight)
        mult = 0
        rem = remaining
        while True:
            rem = rem - deltas[i]
            if (rem < 0).any():
                break
            mult += 1
            rec(i + 1, rem, weight / (math.factorial(mult) * syms[i] ** mult))

    rec(0, net.counts.copy(), 1.0)
    return total


@pytest.mark.parametrize("cap", [6])
def test_edge_ordering_count(triangle, cap):
    # weighted count of loop decompositions equals the per-vertex multinomial
    # prod_x k_x! / prod_xy k_xy!, the number of edge orderings around vertices
    for net in _all_balanced_up_to(triangle, cap):
        if net.total == 0 or not net.support_connected():
            continue
        expected = 1.0
        for kx in net.out_degrees:
            expected *= math.factorial(int(kx))
        for c in net.counts.ravel():
            expected /= math.factorial(int(c))
        assert _weighted_decompositions(net) == pytest.approx(expected, rel=1e-9)
