import networkx as nx
import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from conncalc.graphs import (BipartiteGraph, StructuralError, compose_graphs, identity_matching, isomorphic,
                             lemma1_positivity, pf_data, string_dim, string_dim_by_powers, transpose)
from conncalc.io import bundled, load_graph
from conncalc.scalar import parse_scalar


def from_undirected(name, edges, root):
    """Bipartite graph from an undirected tree/graph, even side containing ``root``."""
    g = nx.Graph(edges)
    color = nx.bipartite.color(g)
    even = sorted(v for v in g if color[v] == color[root])
    odd = sorted(v for v in g if color[v] != color[root])
    return BipartiteGraph.from_edges(name, even, odd,
                                     [(x, y) if x in even else (y, x) for x, y in g.edges()], root)


def affine_d(n):
    """Affine D_n (n >= 4): a chain with two leaves at each end, norm exactly 2."""
    chain = [f"c{k}" for k in range(n - 3)]
    edges = list(zip(chain, chain[1:]))
    edges += [(chain[0], "l0"), (chain[0], "l1"), (chain[-1], "r0"), (chain[-1], "r1")]
    return from_undirected(f"D~{n}", edges, "l0")


A3 = BipartiteGraph.from_edges("A3", ["x"], ["y0", "y1"], [("x", "y0"), ("x", "y1")], "x")
SINGLE = BipartiteGraph.from_edges("A2", ["x"], ["y"], [("x", "y")], "x")


def all_bundled():
    return [load_graph(bundled(c, f"G{k}")) for c in ("sqrt13", "sqrt17") for k in range(4)]


def test_sqrt13_weights(ctx13):
    g = load_graph(bundled("sqrt13", "G0"))
    pf = pf_data(g, "*", ctx13)
    lam = ctx13.generator.real
    expect = {"a": "lambda", "b": "lambda^2-1", "c": "lambda^3-2*lambda", "*": "1"}
    with ctx13.workspace():
        assert abs(pf.norm - lam) < ctx13.tol
        for v, e in expect.items():
            assert abs(pf.weights[v] - parse_scalar(e, ctx13)) < ctx13.tol
        for orbit in (("a", "a_s", "a_ss"), ("b", "b_s", "b_ss"), ("*", "*_s", "*_ss")):
            assert max(abs(pf.weights[v] - pf.weights[orbit[0]]) for v in orbit) < ctx13.tol


def test_small_norms(ctx13):
    pf = pf_data(SINGLE, "x", ctx13)
    assert abs(pf.norm - 1) < ctx13.tol and all(abs(w - 1) < ctx13.tol for w in pf.weights.values())
    with ctx13.workspace():
        import gmpy2
        assert abs(pf_data(A3, "x", ctx13).norm - gmpy2.sqrt(2)) < ctx13.tol


@pytest.mark.parametrize("graph", all_bundled(), ids=lambda g: g.name)
def test_eigen_equation_on_bundled_graphs(ctx13, graph):
    if not graph.is_connected():
        pytest.skip("vertical graph")
    pf = pf_data(graph, graph.basepoint or graph.even[0], ctx13)
    with ctx13.workspace():
        for x in graph.even:
            lhs = sum(k * pf.weights[y] for y, k in graph.neighbors_of_even(x))
            assert abs(lhs - pf.norm * pf.weights[x]) < 1e3 * ctx13.tol * pf.weights[x]
        for y in graph.odd:
            lhs = sum(k * pf.weights[x] for x, k in graph.neighbors_of_odd(y))
            assert abs(lhs - pf.norm * pf.weights[y]) < 1e3 * ctx13.tol * pf.weights[y]
    assert all(w > 0 for w in pf.weights.values())


def test_pf_errors(ctx13):
    two = BipartiteGraph.from_edges("two", ["x", "z"], ["y", "w"], [("x", "y"), ("z", "w")])
    with pytest.raises(StructuralError):
        pf_data(two, "x", ctx13)
    with pytest.raises(StructuralError):
        pf_data(SINGLE, "nope", ctx13)


@pytest.mark.parametrize("case", ["sqrt13", "sqrt17"])
def test_lemma1_passes_on_principal_graphs(case):
    for k in (0, 1):
        g = load_graph(bundled(case, f"G{k}"))
        rep = lemma1_positivity(g, tol=1e-40)
        assert rep.passed and min(rep.minima.values()) >= 0


def test_lemma1_a3_fails():
    rep = lemma1_positivity(A3, "x")
    assert not rep.passed
    assert rep.minima["(GG^t)^2-3GG^t+1"] == -1


@pytest.mark.parametrize("n", range(4, 10))
def test_lemma1_affine_d(ctx13, n):
    g = affine_d(n)
    assert abs(pf_data(g, "l0", ctx13).norm - 2) < ctx13.tol
    assert lemma1_positivity(g).passed


@pytest.mark.parametrize("n, blocks, total, structure", [
    (0, {"*": 1}, 1, "C"),
    (1, {"a": 1}, 1, "C"),
    (2, {"*": 1, "b": 1}, 2, "C + C"),
    (3, {"a": 2, "c": 1}, 5, "C + M2(C)"),
])
def test_string_dim_sqrt13(n, blocks, total, structure):
    prof = string_dim(load_graph(bundled("sqrt13", "G0")), "*", n)
    assert prof.blocks == blocks and prof.total_dim == total and prof.structure() == structure


def test_string_dim_errors():
    g = load_graph(bundled("sqrt13", "G0"))
    with pytest.raises(StructuralError):
        string_dim(g, "zz", 2)
    with pytest.raises(StructuralError):
        string_dim(g, "*", -1)


@settings(max_examples=30, deadline=None)
@given(st.sampled_from([0, 1]), st.sampled_from(["sqrt13", "sqrt17"]), st.integers(0, 9), st.data())
def test_string_dim_matches_matrix_powers(k, case, n, data):
    g = load_graph(bundled(case, f"G{k}"))
    base = data.draw(st.sampled_from(g.even))
    assert string_dim(g, base, n).total_dim == string_dim_by_powers(g, base, n)


def test_compose_and_transpose():
    g1 = load_graph(bundled("sqrt13", "G1"))
    h = compose_graphs(g1, transpose(g1))
    assert np.array_equal(h.mult, g1.mult @ g1.mult.T)
    assert h.m("c", "c") == int((g1.mult @ g1.mult.T)[g1.even_index["c"], g1.even_index["c"]])
    assert compose_graphs(g1, identity_matching(g1.odd)).same_as(g1)
    assert transpose(transpose(g1)).same_as(g1)
    with pytest.raises(StructuralError):
        compose_graphs(g1, g1)


@settings(max_examples=40, deadline=None)
@given(st.lists(st.lists(st.integers(0, 3), min_size=3, max_size=3), min_size=2, max_size=4), st.randoms())
def test_isomorphic_under_relabeling(rows, rnd):
    m = np.array(rows)
    even = [f"e{i}" for i in range(m.shape[0])]
    odd = [f"o{j}" for j in range(m.shape[1])]
    g = BipartiteGraph("g", even, odd, m)
    pe, po = list(range(len(even))), list(range(len(odd)))
    rnd.shuffle(pe)
    rnd.shuffle(po)
    h = BipartiteGraph("h", [f"x{i}" for i in pe], [f"y{j}" for j in po], m[np.ix_(pe, po)])
    assert isomorphic(g, h)
    if m.any():
        bumped = m.copy()
        i, j = np.argwhere(m)[0]
        bumped[i, j] += 1
        assert not isomorphic(g, BipartiteGraph("b", even, odd, bumped))


def test_graph_validation():
    with pytest.raises(StructuralError):
        BipartiteGraph("neg", ["x"], ["y"], np.array([[-1]]))
    with pytest.raises(StructuralError):
        BipartiteGraph.from_edges("bad", ["x"], ["y"], [("x", "q")])
    with pytest.raises(StructuralError):
        BipartiteGraph("dup", ["x", "x"], ["y"], np.array([[1], [1]]))
