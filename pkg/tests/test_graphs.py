import random
from math import factorial

import pytest
from hypothesis import given, strategies as st

from pvalab import graphs
from pvalab.exact_linalg import Echelon, Q
from pvalab.graphs import (
    CapExceeded, Digraph, GraphVector, act, collapse, components, decompose_proper_line,
    delete_vertex, epsilon, graph_stats, has_directed_cycle, has_undirected_cycle, line_basis,
    parse_graph, parse_graph_vector, reduce, reduce_graph, relation_rank, relation_span,
    simple_graphs, standard_line,
)
from pvalab.symgroup import all_permutations, compose


@st.composite
def digraphs(draw, nmax=5):
    n = draw(st.integers(2, nmax))
    pairs = [(i, j) for i in range(1, n + 1) for j in range(1, n + 1) if i != j]
    edges = draw(st.lists(st.sampled_from(pairs), max_size=n + 1, unique=True))
    return Digraph(n, tuple(edges))


def test_parse_and_print():
    g = parse_graph("3; 1->2, 3 -> 2")
    assert g.edges == ((1, 2), (3, 2))
    assert parse_graph(str(g)) == g
    v = parse_graph_vector("2 * [2; 1->2] - 1/2 * [2; 2->1]")
    assert v.terms == {Digraph(2, ((1, 2),)): 2, Digraph(2, ((2, 1),)): Q(-1, 2)}


def test_parse_rejects_tadpole():
    with pytest.raises(ValueError):
        parse_graph("2; 1->1")


def test_surgery():
    g = Digraph(4, ((1, 2), (2, 3), (4, 3)))
    assert delete_vertex(g, 2) == Digraph(3, ((3, 2),))
    assert collapse(g, 1, 2) == Digraph(3, ((1, 2), (3, 2)))
    # collapsing the two ends of a path closes a parallel edge
    assert collapse(Digraph(3, ((1, 2), (2, 3), (1, 3))), 2, 3).edges == ((2, 1), (2, 1))
    assert components(g) == [(1, 2, 3, 4)]
    assert epsilon(g, 1, 2) == 1 and epsilon(g, 3, 4) == -1 and epsilon(g, 1, 4) == 0


def test_stats_and_cycles():
    g = Digraph(3, ((1, 2), (2, 1)))
    assert has_directed_cycle(g) and has_undirected_cycle(g)
    t = Digraph(3, ((1, 2), (3, 2), (1, 3)))
    assert not has_directed_cycle(t) and has_undirected_cycle(t)
    st_ = graph_stats(Digraph(3, ((1, 2),)))
    assert st_.s == 2 and st_.deg(1) == 1 and st_.deg(3) == 0


@given(digraphs())
def test_delete_vertex_component_count(g):
    # deleting an isolated vertex drops one component, a leaf keeps the count
    s = len(components(g))
    for h in range(1, g.n + 1):
        d = graph_stats(g).deg(h)
        if d == 0:
            assert len(components(delete_vertex(g, h))) == s - 1
        elif d == 1:
            assert len(components(delete_vertex(g, h))) == s


@given(digraphs(), st.data())
def test_action_is_a_left_action(g, data):
    p = tuple(data.draw(st.permutations(range(1, g.n + 1))))
    q = tuple(data.draw(st.permutations(range(1, g.n + 1))))
    assert act(compose(p, q), g) == act(p, act(q, g))


@pytest.mark.parametrize("n", [2, 3, 4])
def test_basis_theorem(n):
    assert len(simple_graphs(n)) == 4 ** (n * (n - 1) // 2)
    assert len(simple_graphs(n)) - relation_rank(n) == factorial(n)
    assert len(line_basis(n)) == factorial(n)


@pytest.mark.parametrize("n", [2, 3, 4, 5, 6])
def test_line_basis_size(n):
    assert len(line_basis(n)) == factorial(n)


def test_standard_line_and_decomposition():
    assert standard_line((2, 3)).edges == ((1, 2), (3, 4), (4, 5))
    line = Digraph(4, ((3, 1), (4, 2)))
    shape, tau = decompose_proper_line(line)
    assert act(tau, standard_line(shape)) == line
    assert shape == (2, 2)


def test_reverse_arrow():
    assert reduce_graph(Digraph(2, ((2, 1),))) == {Digraph(2, ((1, 2),)): -1}


def test_triangle_relation_reduces_to_zero():
    tri = parse_graph_vector("[3; 1->2, 2->3] + [3; 2->3, 3->1] + [3; 3->1, 1->2]")
    assert reduce(tri) == {}


def test_basis_element_is_fixed():
    for g in line_basis(4):
        assert reduce_graph(g) == {g: 1}


def test_cyclic_and_repeated_edges_vanish():
    assert reduce_graph(Digraph(3, ((1, 2), (2, 1)))) == {}
    assert reduce_graph(Digraph(3, ((1, 2), (1, 2)))) == {}
    assert reduce_graph(Digraph(3, ((1, 2), (2, 3), (3, 1)))) == {}


# two routes: the forest rewrite vs membership in the span of the raw relations
@pytest.mark.parametrize("n,count", [(3, None), (4, 150)])
def test_reduction_agrees_with_relation_span(n, count):
    ech = Echelon()
    for v in relation_span(n):
        ech.add(v.terms)
    gs = simple_graphs(n)
    if count:
        gs = random.Random(n).sample(gs, count)
    for g in gs:
        diff = GraphVector(n, {g: 1}) - GraphVector(n, reduce_graph(g))
        assert ech.contains(diff.terms)


@pytest.mark.parametrize("n", [3, 4])
def test_reduction_equivariant(n):
    rng = random.Random(0)
    perms = all_permutations(n)
    for g in rng.sample(simple_graphs(n), 40):
        p = rng.choice(perms)
        lhs = reduce_graph(act(p, g))
        rhs = {}
        for h, c in reduce_graph(g).items():
            for k, d in reduce_graph(act(p, h)).items():
                rhs[k] = rhs.get(k, 0) + c * d
        assert lhs == {k: v for k, v in rhs.items() if v}


@pytest.mark.parametrize("n", range(2, 6))
def test_identity_lemma(n):
    for m in range(2, n + 1):
        assert graphs.check_identity_lemma(n, m)


def test_caps():
    with pytest.raises(CapExceeded):
        line_basis(7)
    with pytest.raises(CapExceeded):
        relation_span(6)
