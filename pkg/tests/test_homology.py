"""Cycle space, harmonic duals, torus volumes, and the winding-class law."""

import numpy as np
import pytest

from loopsoup import (
    Disconnected,
    EmptyBasis,
    GridTooCoarse,
    HomologyClass,
    Network,
    NotEulerian,
    TooLarge,
    WeightedGraph,
    build_kernel,
    cycle_basis,
    direct_sample,
    harmonic_basis,
    homology_distribution,
    homology_distribution_auto,
    intersection_matrix,
    jacobian_volume,
    jump_matrix,
    network_homology_class,
    pairing_phase,
)


def _directed_triangle(graph, reverse=False):
    counts = np.zeros((3, 3), dtype=np.int64)
    if reverse:
        counts[1, 0] = counts[2, 1] = counts[0, 2] = 1
    else:
        counts[0, 1] = counts[1, 2] = counts[2, 0] = 1
    return Network(graph, counts)


def _scaled_triangle(ca, cb, cc):
    return WeightedGraph.build(
        ("a", "b", "c"),
        (("a", "b", ca), ("b", "c", cb), ("a", "c", cc)),
        {"a": 1.0, "b": 1.0, "c": 1.0},
    )


# ---------------------------------------------------------------- cycle space


def test_cycle_basis_ranks(two_point, path3, triangle, complete4):
    assert cycle_basis(two_point).n == 0
    assert cycle_basis(path3).n == 0
    assert cycle_basis(triangle).n == 1
    assert cycle_basis(complete4).n == 3


def test_cycle_basis_disconnected():
    g = WeightedGraph.build(
        ("a", "b", "c", "d"),
        (("a", "b", 1.0), ("c", "d", 1.0)),
        {"a": 1.0, "c": 1.0},
    )
    with pytest.raises(Disconnected):
        cycle_basis(g)


def test_cycles_are_circulations(complete4):
    basis = cycle_basis(complete4)
    for cyc in basis.cycles:
        assert np.array_equal(cyc, -cyc.T)
        assert not cyc.sum(axis=1).any()
    # tree plus chords covers every edge exactly once
    assert len(basis.tree_edges) + len(basis.nontree_edges) == len(complete4.edge_pairs)


def test_homology_class(triangle):
    basis = cycle_basis(triangle)
    fwd = network_homology_class(_directed_triangle(triangle), basis)
    rev = network_homology_class(_directed_triangle(triangle, reverse=True), basis)
    assert fwd.coords in ((1,), (-1,))
    assert rev.coords == tuple(-c for c in fwd.coords)
    # symmetric traffic winds nowhere
    sym = Network(triangle, np.array([[0, 1, 0], [1, 0, 1], [0, 1, 0]]))
    assert network_homology_class(sym, basis).coords == (0,)
    # additivity over network sums
    both = _directed_triangle(triangle) + _directed_triangle(triangle)
    assert network_homology_class(both, basis).coords == tuple(2 * c for c in fwd.coords)
    unbal = Network(triangle, np.array([[0, 1, 0], [0, 0, 0], [0, 0, 0]]))
    with pytest.raises(NotEulerian):
        network_homology_class(unbal, basis)
    assert (HomologyClass((1,)) + HomologyClass((2,))).coords == (3,)


# ------------------------------------------------------------- harmonic forms


def test_harmonic_basis_duality(triangle, complete4):
    for graph in (triangle, complete4):
        basis = cycle_basis(graph)
        forms = harmonic_basis(graph, basis)
        assert len(forms) == basis.n
        for i, form in enumerate(forms):
            # dual pairing with the fundamental cycles
            for j, cyc in enumerate(basis.cycles):
                expected = 1.0 if i == j else 0.0
                assert form.holonomy(cyc) == pytest.approx(expected, abs=1e-9)
            # conductance-weighted divergence vanishes at every vertex
            div = (graph.conductance * form.values).sum(axis=1)
            assert np.abs(div).max() < 1e-9
            assert np.allclose(form.values, -form.values.T)


def test_harmonic_triangle_values(triangle):
    basis = cycle_basis(triangle)
    (form,) = harmonic_basis(triangle, basis)
    # unit conductances: the dual form spreads 1/3 around the loop
    off = np.abs(form.values[np.nonzero(form.values)])
    assert off == pytest.approx(np.full(6, 1 / 3))


# -------------------------------------------------------- intersection, volume


def test_intersection_matrix(triangle):
    basis = cycle_basis(triangle)
    lam = intersection_matrix(basis, triangle)
    assert lam == pytest.approx(np.array([[3.0]]))
    scaled = _scaled_triangle(1.0, 2.0, 3.0)
    lam2 = intersection_matrix(cycle_basis(scaled), scaled)
    assert lam2 == pytest.approx(np.array([[1 + 1 / 2 + 1 / 3]]))


def test_intersection_empty(two_point):
    with pytest.raises(EmptyBasis):
        intersection_matrix(cycle_basis(two_point), two_point)


def test_jacobian_volume(triangle, two_point):
    vol = jacobian_volume(triangle)
    assert vol.value == pytest.approx(1 / np.sqrt(3))
    assert vol.via_intersection == pytest.approx(vol.via_trees)
    assert vol.tree_weight == pytest.approx(3.0)
    assert not vol.degenerate

    scaled = jacobian_volume(_scaled_triangle(1.0, 2.0, 3.0))
    assert scaled.tree_weight == pytest.approx(11.0)
    assert scaled.value == pytest.approx(11.0**-0.5)

    trivial = jacobian_volume(two_point)
    assert trivial.degenerate
    assert trivial.value == 1.0


# ------------------------------------------------------------- winding law


def test_homology_distribution_trivial(two_point_kernel, two_point):
    law = homology_distribution(two_point_kernel, cycle_basis(two_point), 1.0, 8)
    assert law.probs == {(): 1.0}


def test_homology_distribution_triangle(triangle_kernel, triangle):
    basis = cycle_basis(triangle)
    law = homology_distribution(triangle_kernel, basis, 1.0, 16)
    assert law.captured_mass >= 0.999
    assert sum(law.probs.values()) <= 1.0 + 1e-9
    assert law.symmetry_defect() <= 1e-10
    assert law.imag_residue <= 1e-10 and law.negative_residue <= 1e-10
    # the trivial class dominates
    assert law.prob((0,)) > max(p for k, p in law.probs.items() if k != (0,))
    # grid refinement barely moves the answer
    law32 = homology_distribution(triangle_kernel, basis, 1.0, 32)
    for key in set(law.probs) | set(law32.probs):
        assert law.prob(key) == pytest.approx(law32.prob(key), abs=1e-8)


def test_homology_distribution_bad_grid(triangle_kernel, triangle):
    basis = cycle_basis(triangle)
    for m in (4, 12, 17):
        with pytest.raises(ValueError):
            homology_distribution(triangle_kernel, basis, 1.0, m)


def test_homology_forms_gauge_invariance(triangle_kernel, triangle):
    basis = cycle_basis(triangle)
    law_ind = homology_distribution(triangle_kernel, basis, 0.5, 16)
    duals = [f.values for f in harmonic_basis(triangle, basis)]
    law_harm = homology_distribution(triangle_kernel, basis, 0.5, 16, forms=duals)
    for key in set(law_ind.probs) | set(law_harm.probs):
        assert law_ind.prob(key) == pytest.approx(law_harm.prob(key), abs=1e-10)


def test_pairing_phase_matches_class(triangle_kernel, triangle):
    basis = cycle_basis(triangle)
    (u, v) = basis.nontree_edges[0]
    t = 0.37
    omega = np.zeros((3, 3))
    omega[u, v] = t
    omega[v, u] = -t
    for seed in range(20):
        net = jump_matrix(direct_sample(triangle_kernel, 1.0, seed=seed))
        coords = network_homology_class(net, basis).coords
        expected = np.exp(2j * np.pi * t * coords[0])
        assert pairing_phase(net, omega) == pytest.approx(expected)


def test_grid_too_coarse():
    # nearly recurrent triangle: windings spread far beyond a tiny window
    g = _scaled_triangle(50.0, 50.0, 50.0)
    g = WeightedGraph.build(
        g.vertices,
        tuple((g.vertices[u], g.vertices[v], g.conductance[u, v]) for u, v in g.edge_pairs),
        {v: 0.01 for v in g.vertices},
    )
    kernel = build_kernel(g)
    with pytest.raises(GridTooCoarse):
        homology_distribution(kernel, cycle_basis(g), 1.0, 8)


def test_homology_auto(triangle_kernel, triangle):
    basis = cycle_basis(triangle)
    law = homology_distribution_auto(triangle_kernel, basis, 1.0)
    direct = homology_distribution(triangle_kernel, basis, 1.0, law.grid_m)
    assert law.probs == direct.probs


def test_homology_auto_too_large():
    names = ("a", "b", "c", "d", "e")
    edges = tuple(
        (names[i], names[j], 1.0) for i in range(5) for j in range(i + 1, 5)
    )
    g = WeightedGraph.build(names, edges, {"a": 1.0})
    with pytest.raises(TooLarge):
        homology_distribution_auto(build_kernel(g), cycle_basis(g), 1.0)
