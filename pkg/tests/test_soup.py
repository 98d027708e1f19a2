"""Both loop-ensemble samplers: structure, determinism, quick law checks."""

import numpy as np
import pytest

from loopsoup import (
    Network,
    TailTooHeavy,
    WeightedGraph,
    build_kernel,
    direct_sample,
    jump_matrix,
    merge_soups,
    mu_mass_nontrivial,
    occupation,
    wilson_sample,
)
from loopsoup.soup import BasedLoop, _canonical


def _assert_canonical(loop: BasedLoop):
    verts = loop.vertices
    assert verts[0] == min(verts)
    rotations = [
        tuple(verts[i:] + verts[:i]) for i in range(len(verts)) if verts[i] == verts[0]
    ]
    assert tuple(verts) == min(rotations)


def test_wilson_structure(two_point_kernel):
    parents, soup = wilson_sample(two_point_kernel, 42)
    assert soup.alpha == 1.0
    assert len(parents) == 2
    assert all(p == -1 or 0 <= p < 2 for p in parents)
    assert soup.trivial_time.shape == (2,)
    assert (soup.trivial_time >= 0).all()
    for loop in soup.loops:
        assert loop.length >= 2
        assert len(loop.times) == loop.length
        assert all(t > 0 for t in loop.times)
        _assert_canonical(loop)


def test_wilson_determinism(triangle_kernel):
    _, a = wilson_sample(triangle_kernel, 7)
    _, b = wilson_sample(triangle_kernel, 7)
    assert len(a.loops) == len(b.loops)
    for la, lb in zip(a.loops, b.loops):
        assert la.vertices == lb.vertices
        assert la.times == lb.times
    assert a.trivial_time == pytest.approx(b.trivial_time)


def test_direct_determinism(triangle_kernel):
    a = direct_sample(triangle_kernel, 1.5, seed=11)
    b = direct_sample(triangle_kernel, 1.5, seed=11)
    assert len(a.loops) == len(b.loops)
    for la, lb in zip(a.loops, b.loops):
        assert la.vertices == lb.vertices
        assert la.times == pytest.approx(lb.times)


def test_direct_structure(triangle_kernel):
    soup = direct_sample(triangle_kernel, 2.0, seed=3)
    assert soup.alpha == 2.0
    for loop in soup.loops:
        assert loop.length >= 2
        _assert_canonical(loop)
        # consecutive vertices are joined by edges
        verts = loop.vertices + (loop.vertices[0],)
        for u, v in zip(verts[:-1], verts[1:]):
            assert triangle_kernel.graph.conductance[u, v] > 0
    with pytest.raises(ValueError):
        direct_sample(triangle_kernel, 0.0, seed=1)


def test_jump_networks_balanced(triangle_kernel):
    for seed in range(30):
        _, soup = wilson_sample(triangle_kernel, seed)
        assert jump_matrix(soup).is_eulerian()
        soup2 = direct_sample(triangle_kernel, 0.7, seed=seed)
        assert jump_matrix(soup2).is_eulerian()


def test_single_vertex_soups(single_vertex_kernel):
    _, soup = wilson_sample(single_vertex_kernel, 5)
    assert soup.loops == ()
    assert soup.trivial_time[0] > 0
    soup2 = direct_sample(single_vertex_kernel, 0.5, seed=5)
    assert soup2.loops == ()
    assert jump_matrix(soup2).total == 0


def test_canonical_rotation_helper():
    verts, times = _canonical((2, 0, 1, 0), (0.2, 0.3, 0.4, 0.5))
    assert verts == (0, 1, 0, 2)
    # times rotate together with the vertices
    assert times == (0.3, 0.4, 0.5, 0.2)


def test_trivial_time_mean(single_vertex_kernel):
    # one-point holding mass is Gamma(alpha, 1) per vertex
    for alpha in (0.5, 2.0):
        total = 0.0
        n = 3000
        for r in range(n):
            soup = direct_sample(single_vertex_kernel, alpha, seed=1000 + r)
            total += soup.trivial_time[0]
        assert total / n == pytest.approx(alpha, abs=5 * np.sqrt(alpha / n))


def test_occupation_mean_two_point(two_point_kernel):
    # E occupation at a vertex = alpha * G_xx = 2/3 at alpha 1
    n = 4000
    acc = np.zeros(2)
    for r in range(n):
        _, soup = wilson_sample(two_point_kernel, r)
        acc += occupation(soup, two_point_kernel)
    assert acc / n == pytest.approx([2 / 3, 2 / 3], abs=0.04)


def test_edge_count_mean_two_point(two_point_kernel):
    # E N_ab = P_ab G_ba lam_a = 1/3
    n = 6000
    acc = 0
    for r in range(n):
        _, soup = wilson_sample(two_point_kernel, r)
        acc += jump_matrix(soup).counts[0, 1]
    assert acc / n == pytest.approx(1 / 3, abs=0.03)


def test_merge_soups(triangle_kernel):
    a = direct_sample(triangle_kernel, 0.5, seed=1)
    b = direct_sample(triangle_kernel, 1.0, seed=2)
    m = merge_soups(a, b)
    assert m.alpha == pytest.approx(1.5)
    assert len(m.loops) == len(a.loops) + len(b.loops)
    assert m.trivial_time == pytest.approx(a.trivial_time + b.trivial_time)


def test_mu_mass_nontrivial(two_point_kernel, triangle_kernel):
    assert mu_mass_nontrivial(two_point_kernel) == pytest.approx(-np.log(0.75))
    assert mu_mass_nontrivial(triangle_kernel) == pytest.approx(-np.log(16 / 27))


def test_tail_too_heavy():
    g = WeightedGraph.build(("a", "b"), (("a", "b", 1.0),), {"a": 1e-6})
    kernel = build_kernel(g)
    with pytest.raises(TailTooHeavy):
        direct_sample(kernel, 1.0, seed=0)


def test_loop_time_totals(triangle_kernel):
    _, soup = wilson_sample(triangle_kernel, 123)
    for loop in soup.loops:
        assert loop.total_time == pytest.approx(sum(loop.times))
        assert not loop.is_trivial
