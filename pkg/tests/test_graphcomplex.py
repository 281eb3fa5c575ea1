from __future__ import annotations

import random

import pytest
from hypothesis import given, settings, strategies as st

from tropgc.canonical import automorphisms, canonical_key, permutation_sign
from tropgc.enumeration import enumerate_gc_generators
from tropgc.exactla import homology_table, in_column_space
from tropgc.graphcomplex import (
    ChainVector,
    boundary,
    boundary_matrix,
    build_graph_complex,
    chain_to_column,
    check_gc_graph,
    coboundary_complex,
    coboundary_matrix,
    dual_coboundary,
    gc_basis,
    gc_degree_range,
    normalize,
    vertex_splittings,
    wheel,
    wheel_chain,
)
from tropgc.graphs import GraphError, StableGraph, complete_graph, contract_index, dumbbell, genus, theta


def test_check_gc_graph():
    with pytest.raises(GraphError):
        check_gc_graph(dumbbell())
    with pytest.raises(GraphError):
        check_gc_graph(StableGraph((1, 0), ((0, 1), (0, 1))))
    with pytest.raises(GraphError):
        normalize(complete_graph(4), [0, 1, 2, 3, 4, 4])


def test_zero_generators():
    assert normalize(theta()) is None  # parallel edges
    assert normalize(wheel(4)) is None
    assert normalize(wheel(6)) is None
    for g in (3, 5, 7):
        assert normalize(wheel(g)) is not None


def test_k4_is_the_genus_3_basis():
    sign, gen = normalize(complete_graph(4))
    assert gen.degree == 0 and gen.genus == 3
    assert gc_basis(3, 0) == (gen,)
    assert normalize(wheel(3))[1] == gen


def test_ordering_sign():
    sign, gen = normalize(complete_graph(4))
    assert normalize(complete_graph(4), [1, 0, 2, 3, 4, 5]) == (-sign, gen)
    assert normalize(complete_graph(4), [1, 2, 0, 3, 4, 5]) == (sign, gen)


def _relabel(gr: StableGraph, rng: random.Random):
    n = gr.n_vertices
    perm = list(range(n))
    rng.shuffle(perm)
    order = list(range(gr.n_edges))
    rng.shuffle(order)
    # new edge j is old edge order[j]
    edges = []
    for j in order:
        u, v = gr.edges[j]
        edges.append((perm[v], perm[u]) if rng.random() < 0.5 else (perm[u], perm[v]))
    return StableGraph((0,) * n, tuple(edges)), order


GENERATORS = [x for g in (3, 4, 5) for k in gc_degree_range(g) for x in enumerate_gc_generators(g, k)]


@settings(max_examples=50)
@given(st.sampled_from(GENERATORS), st.integers(0, 2 ** 32))
def test_normalize_sign_equivariance(gr, seed):
    rng = random.Random(seed)
    base = normalize(gr)
    sigma = list(range(gr.n_edges))
    rng.shuffle(sigma)
    t = normalize(gr, sigma)
    if base is None:
        assert t is None
        return
    assert t == (permutation_sign(sigma) * base[0], base[1])
    # relabel vertices and edges; ordering the new edges like the old ones gives the same element
    h, order = _relabel(gr, rng)
    inv = [0] * len(order)
    for j, i in enumerate(order):
        inv[i] = j
    assert normalize(h, inv) == base


def test_vertex_splittings():
    k4 = complete_graph(4)
    assert list(vertex_splittings(k4, 0)) == []
    # a 4-valent vertex splits in 3 ways
    g = contract_index(k4, 0)
    v = [i for i, d in enumerate(g.valences()) if d == 4][0]
    splits = list(vertex_splittings(g, v))
    assert len(splits) == 3
    for s in splits:
        assert genus(s) == 3 and s.n_edges == 6
    assert any(canonical_key(contract_index(s, 5)) == canonical_key(g) for s in splits)
    # valence n gives 2^(n-1) - n - 1 splittings
    w = StableGraph((0, 0), ((0, 1),) * 6)
    assert len(list(vertex_splittings(w, 0))) == 2 ** 5 - 6 - 1


def test_contraction_undoes_splitting():
    for g in (4, 5):
        for k in gc_degree_range(g):
            for x in gc_basis(g, k):
                for v in range(x.graph.n_vertices):
                    for s in vertex_splittings(x.graph, v):
                        assert canonical_key(contract_index(s, s.n_edges - 1)) == x.key


@pytest.mark.parametrize("g", [3, 4, 5, 6])
def test_boundary_squares_to_zero(g):
    build_graph_complex(g).check_squares_zero()


@pytest.mark.parametrize("g", [3, 4, 5, 6])
def test_coboundary_squares_to_zero(g):
    c = coboundary_complex(g)
    for k in c.degrees():
        if k + 1 in c.differentials:
            assert (c.differentials[k + 1] @ c.differentials[k]).is_zero()


@pytest.mark.parametrize("g", [3, 4, 5])
def test_euler_characteristic_consistency(g):
    c = build_graph_complex(g)
    rows = homology_table(c)
    assert sum((-1) ** (r.degree % 2) * r.dim_homology for r in rows) == c.euler_characteristic()


def test_boundary_of_generator_vectors():
    for g in (5, 6):
        for k in gc_degree_range(g):
            for x in gc_basis(g, k):
                assert not any(c.denominator != 1 for c in boundary(x).values())
                for y in boundary(x):
                    assert y.degree == k - 1 and y.genus == g


@pytest.mark.parametrize("g", [3, 4])
def test_coboundary_is_transpose(g):
    for k in gc_degree_range(g):
        assert coboundary_matrix(g, k) == boundary_matrix(g, k + 1).transpose()


@pytest.mark.parametrize("g", [5, 6])
def test_coboundary_is_aut_weighted_transpose(g):
    for k in gc_degree_range(g):
        d, b = coboundary_matrix(g, k), boundary_matrix(g, k + 1)
        a0 = [automorphisms(x.graph).group_order for x in gc_basis(g, k)]
        a1 = [automorphisms(x.graph).group_order for x in gc_basis(g, k + 1)]
        assert set(d.entries) == {(c, r) for r, c in b.entries}
        for (r, c), v in d.entries.items():
            assert v * a1[r] == b[(c, r)] * a0[c]


def test_wheel_cycles():
    for g in (3, 5, 7):
        assert not boundary(next(iter(wheel_chain(g))))
    assert not wheel_chain(4) and not wheel_chain(6)
    with pytest.raises(GraphError):
        wheel(2)


def test_w5_not_a_boundary():
    col = chain_to_column(wheel_chain(5), gc_basis(5, 0))
    assert any(col)
    assert not in_column_space(boundary_matrix(5, 1), col)


def test_chain_vector():
    v = ChainVector()
    x = gc_basis(3, 0)[0]
    v.add(x, 2)
    v.add(x, -2)
    assert not v
    v.add(x, 1)
    assert (-v)[x] == -1
    assert dual_coboundary(x) == {}  # nothing above K4 in genus 3


def test_graph_homology_small_genus():
    dims = {g: {r.degree: r.dim_homology for r in homology_table(build_graph_complex(g))} for g in (3, 4, 5)}
    assert dims[3] == {-2: 0, -1: 0, 0: 1}
    assert not any(dims[4].values())
    assert dims[5][0] == 1 and sum(dims[5].values()) == 1
    with pytest.raises(ValueError):
        build_graph_complex(1)
