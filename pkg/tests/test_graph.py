"""Graph construction, file I/O, metrics, and the HITS ranking."""

import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from sociogen.errors import GraphError, ParseError
from sociogen.graph import (
    Graph,
    average_degree,
    clustering_coefficient,
    clustering_coefficients,
    hits,
    load_edge_list,
    nodes_within_distance,
    save_edge_list,
    triangle_counts,
)
from tests.conftest import star_graph

PROPERTY_SETTINGS = settings(max_examples=60, deadline=None)


def random_edge_arrays(draw, max_nodes=12, max_edges=40):
    n = draw(st.integers(2, max_nodes))
    m = draw(st.integers(1, max_edges))
    u = draw(st.lists(st.integers(0, n - 1), min_size=m, max_size=m))
    v = draw(st.lists(st.integers(0, n - 1), min_size=m, max_size=m))
    return n, np.array(u), np.array(v)


def brute_triangles(g: Graph) -> np.ndarray:
    counts = np.zeros(g.num_nodes, dtype=np.int64)
    edge_set = {tuple(e) for e in g.edges.tolist()}
    for a, b, c in itertools.combinations(range(g.num_nodes), 3):
        if (a, b) in edge_set and (b, c) in edge_set and (a, c) in edge_set:
            counts[[a, b, c]] += 1
    return counts


class TestConstruction:
    def test_from_edges_dedups_and_drops_self_loops(self):
        u = np.array([0, 1, 1, 2, 3, 0])
        v = np.array([1, 0, 1, 3, 2, 1])
        g = Graph.from_edges(4, u, v)
        assert g.num_edges == 2
        assert g.has_edge(0, 1) and g.has_edge(2, 3)
        assert not g.has_edge(1, 1)

    def test_neighbors_sorted_and_degrees_consistent(self, two_cliques):
        for v in range(8):
            nbrs = two_cliques.neighbors(v)
            assert list(nbrs) == sorted(nbrs)
            assert two_cliques.degree(v) == len(nbrs) == 3
        assert two_cliques.degrees.sum() == 2 * two_cliques.num_edges

    def test_edges_are_read_only(self, two_cliques):
        with pytest.raises(ValueError):
            two_cliques.edges[0, 0] = 99

    def test_adjacency_matches_edges(self, path5):
        a = path5.adjacency().toarray()
        assert (a == a.T).all()
        assert a.sum() == 2 * path5.num_edges

    @PROPERTY_SETTINGS
    @given(data=st.data())
    def test_from_edges_normalizes_any_input(self, data):
        n, u, v = random_edge_arrays(data.draw, max_nodes=10)
        keep = u != v
        g = Graph.from_edges(n, u, v)
        expected = {(min(a, b), max(a, b)) for a, b in zip(u[keep], v[keep])}
        assert g.num_edges == len(expected)
        assert {tuple(e) for e in g.edges.tolist()} == expected


class TestEdgeListIO:
    def test_round_trip(self, tmp_path, two_cliques):
        path = tmp_path / "g.csv"
        save_edge_list(two_cliques, path)
        g2 = load_edge_list(path)
        assert g2.num_nodes == two_cliques.num_nodes
        assert (g2.edges == two_cliques.edges).all()

    def test_accepts_space_and_semicolon_separators(self, tmp_path):
        path = tmp_path / "g.csv"
        path.write_text("0 1\n1;2\n2\t3\n")
        g = load_edge_list(path)
        assert g.num_edges == 3 and g.num_nodes == 4

    def test_blank_lines_ignored(self, tmp_path):
        path = tmp_path / "g.csv"
        path.write_text("0\t1\n\n\n1\t2\n")
        assert load_edge_list(path).num_edges == 2

    def test_parse_error_reports_line_number(self, tmp_path):
        path = tmp_path / "g.csv"
        path.write_text("0\t1\nnope\n")
        with pytest.raises(ParseError) as exc:
            load_edge_list(path)
        assert ":2:" in str(exc.value)

    def test_negative_id_rejected(self, tmp_path):
        path = tmp_path / "g.csv"
        path.write_text("0\t-1\n")
        with pytest.raises(ParseError):
            load_edge_list(path)

    def test_wrong_field_count_rejected(self, tmp_path):
        path = tmp_path / "g.csv"
        path.write_text("0\t1\t2\n")
        with pytest.raises(ParseError):
            load_edge_list(path)

    def test_empty_file_rejected(self, tmp_path):
        path = tmp_path / "g.csv"
        path.write_text("\n")
        with pytest.raises(GraphError):
            load_edge_list(path)

    def test_self_loops_only_rejected(self, tmp_path):
        path = tmp_path / "g.csv"
        path.write_text("3\t3\n7\t7\n")
        with pytest.raises(GraphError):
            load_edge_list(path)


class TestMetrics:
    def test_average_degree(self, two_cliques):
        assert average_degree(two_cliques) == pytest.approx(3.0)

    def test_triangle_counts_on_cliques(self, two_cliques):
        # every node of a 4-clique closes C(3,2) = 3 triangles
        assert (triangle_counts(two_cliques) == 3).all()

    @PROPERTY_SETTINGS
    @given(data=st.data())
    def test_triangle_counts_match_brute_force(self, data):
        n, u, v = random_edge_arrays(data.draw)
        if not (u != v).any():
            return
        g = Graph.from_edges(n, u, v)
        assert (triangle_counts(g) == brute_triangles(g)).all()

    def test_clustering_zero_below_degree_two(self, path5):
        cc = clustering_coefficients(path5)
        assert cc[0] == 0.0 and cc[4] == 0.0

    def test_clustering_one_on_clique(self, two_cliques):
        assert clustering_coefficients(two_cliques) == pytest.approx(1.0)

    @PROPERTY_SETTINGS
    @given(data=st.data())
    def test_clustering_matches_definition(self, data):
        n, u, v = random_edge_arrays(data.draw)
        if not (u != v).any():
            return
        g = Graph.from_edges(n, u, v)
        tri = brute_triangles(g)
        cc = clustering_coefficients(g)
        for node in range(n):
            d = g.degree(node)
            want = 0.0 if d < 2 else 2.0 * tri[node] / (d * (d - 1))
            assert cc[node] == pytest.approx(want)
            assert clustering_coefficient(g, node) == pytest.approx(want)

    def test_nodes_within_distance_on_path(self, path5):
        assert nodes_within_distance(path5, 0, 1) == {1}
        assert nodes_within_distance(path5, 0, 2) == {1, 2}
        assert nodes_within_distance(path5, 2, 2) == {0, 1, 3, 4}
        assert 2 not in nodes_within_distance(path5, 2, 2)


def dense_hits_oracle(g: Graph, iters=2000):
    """Power iteration on the dense adjacency, kept deliberately naive."""
    a = g.adjacency().toarray().astype(float)
    auth = np.ones(g.num_nodes)
    for _ in range(iters):
        hub = a @ auth
        hub /= np.linalg.norm(hub) or 1.0
        auth = a.T @ hub
        auth /= np.linalg.norm(auth) or 1.0
    return auth


class TestHits:
    def test_star_concentrates_authority_on_hub(self):
        g = star_graph(6)
        m = hits(g)
        assert m.converged
        assert m.authority[0] == max(m.authority)

    def test_matches_dense_oracle(self, karate):
        m = hits(g=karate, tol=1e-12, max_iters=5000)
        want = dense_hits_oracle(karate)
        assert np.allclose(m.authority, want, atol=1e-6)

    def test_symmetric_graph_gives_equal_scores(self, two_cliques):
        m = hits(two_cliques)
        assert np.allclose(m.authority, m.authority[0])

    def test_edgeless_graph(self):
        g = star_graph(1)  # smallest legal graph, then test the metric guard
        empty = Graph(3, np.empty((0, 2), dtype=np.int64))
        m = hits(empty)
        assert (m.authority == 0).all() and m.converged
        assert g.num_edges == 1

    def test_deterministic(self, karate):
        a = hits(karate).authority
        b = hits(karate).authority
        assert (a == b).all()

    def test_metrics_bundle_degree_and_clustering(self, karate):
        m = hits(karate)
        assert (m.degree == karate.degrees).all()
        assert m.clustering == pytest.approx(clustering_coefficients(karate))
