from __future__ import annotations

import networkx as nx
import pytest
from hypothesis import given
from hypothesis import strategies as st

from fptcount.graph import (
    Coloring, ColorMultiset, DuplicateEdgeError, Graph, MalformedHeaderError, MalformedLineError, SelfLoopError,
    VertexRangeError, complement, connected_components, dump_coloring, dump_graph, induced_subgraph, is_connected,
    load_coloring, load_graph, parse_motif, random_coloring, random_graph, relabel,
)

from conftest import graphs


def to_nx(g: Graph) -> nx.Graph:
    h = nx.Graph()
    h.add_nodes_from(range(g.n))
    h.add_edges_from(g.edges)
    return h


def test_load_path():
    g = load_graph("3 2\n0 1\n1 2\n")
    assert g.n == 3 and g.edges == {(0, 1), (1, 2)}


def test_load_single_vertex():
    g = load_graph("1 0\n")
    assert g.n == 1 and g.m == 0


def test_comments_and_blank_lines_ignored():
    g = load_graph("# a triangle\n3 3\n\n0 1\n# middle\n1 2\n0 2\n")
    assert g.m == 3


@pytest.mark.parametrize("text, err, line", [
    ("3 1\n0 3\n", VertexRangeError, 2),
    ("3 2\n0 1\n1 0\n", DuplicateEdgeError, 3),
    ("3 1\n1 1\n", SelfLoopError, 2),
    ("three 1\n0 1\n", MalformedHeaderError, 1),
    ("3 2\n0 1\n", MalformedHeaderError, 2),
    ("3 1\n0 x\n", MalformedLineError, 2),
    ("", MalformedHeaderError, 1),
])
def test_parse_errors_name_the_line(text, err, line):
    with pytest.raises(err) as info:
        load_graph(text)
    assert info.value.lineno == line
    assert f"line {line}" in str(info.value)


def test_parse_error_classes_are_distinct():
    classes = {VertexRangeError, DuplicateEdgeError, SelfLoopError, MalformedHeaderError}
    assert len(classes) == 4
    assert not any(issubclass(a, b) for a in classes for b in classes if a is not b)


def test_graph_rejects_bad_edges():
    with pytest.raises(ValueError):
        Graph(2, frozenset({(0, 0)}))
    with pytest.raises(ValueError):
        Graph(2, frozenset({(0, 2)}))


@given(graphs())
def test_roundtrip(g):
    assert load_graph(dump_graph(g)) == g


@given(graphs())
def test_adjacency_symmetric_and_consistent(g):
    for u in range(g.n):
        for v in g.adjacency[u]:
            assert u in g.adjacency[v]
            assert g.has_edge(u, v) and g.adj_matrix[u, v]
    assert sum(g.degree(v) for v in range(g.n)) == 2 * g.m


@given(graphs(max_n=9), st.data())
def test_induced_subgraph_matches_networkx(g, data):
    U = data.draw(st.sets(st.integers(0, max(g.n - 1, 0)), max_size=g.n)) if g.n else set()
    h = induced_subgraph(g, U)
    ref = nx.convert_node_labels_to_integers(to_nx(g).subgraph(sorted(U)), ordering="sorted")
    assert h.n == len(U) and h.edges == {tuple(sorted(e)) for e in ref.edges}


def test_induced_subgraph_bad_vertex():
    with pytest.raises(ValueError):
        induced_subgraph(Graph.path(3), [0, 5])


@given(graphs(max_n=9))
def test_connectivity_matches_networkx(g):
    if g.n:
        assert is_connected(g) == nx.is_connected(to_nx(g))
    comps = connected_components(g)
    assert sorted(map(sorted, comps)) == sorted(sorted(c) for c in nx.connected_components(to_nx(g)))


def test_empty_graph_is_connected():
    assert is_connected(Graph(0))


@given(graphs())
def test_complement_involution(g):
    assert complement(complement(g)) == g
    assert g.m + complement(g).m == g.n * (g.n - 1) // 2


@given(graphs(), st.randoms())
def test_relabel_preserves_structure(g, rnd):
    perm = list(range(g.n))
    rnd.shuffle(perm)
    h = relabel(g, perm)
    assert nx.is_isomorphic(to_nx(g), to_nx(h))


def test_petersen_shape():
    p = Graph.petersen()
    assert p.n == 10 and p.m == 15 and all(p.degree(v) == 3 for v in range(10))
    assert nx.is_isomorphic(to_nx(p), nx.petersen_graph())


def test_random_graph_is_seeded():
    assert random_graph(12, 0.4, 5) == random_graph(12, 0.4, 5)
    assert random_graph(12, 0.0, 1).m == 0 and random_graph(6, 1.0, 1).m == 15


def test_coloring_names_and_roundtrip():
    c = load_coloring("0 red\n1 blue\n2 blue\n", 3)
    assert c.colors == (0, 1, 1) and c.palette == {0, 1}
    assert c.color_id("blue") == 1
    assert load_coloring(dump_coloring(c), 3).colors == c.colors
    assert load_coloring("0 4\n1 2\n").colors == (4, 2)


def test_coloring_errors():
    with pytest.raises(VertexRangeError):
        load_coloring("0 a\n3 b\n", 2)
    with pytest.raises(MalformedLineError):
        load_coloring("0 a\n", 2)
    with pytest.raises(MalformedLineError):
        load_coloring("0 a\n0 b\n", 1)


def test_coloring_classes_partition_vertices():
    c = random_coloring(20, 3, seed=1)
    classes = c.classes()
    assert sorted(v for vs in classes.values() for v in vs) == list(range(20))
    assert set(classes) == c.palette


def test_motif_parsing():
    c = load_coloring("0 red\n1 blue\n", 2)
    m = parse_motif("red:1,blue:2", c)
    assert m.k == 3 and m.counts == {0: 1, 1: 2}
    assert parse_motif("0:2,1:1").as_list() == [0, 0, 1]
    absent = parse_motif("green:1", c)
    assert not set(absent.counts) & c.palette
    with pytest.raises(ValueError):
        ColorMultiset({0: 0})
    with pytest.raises(ValueError):
        parse_motif("red", c)
